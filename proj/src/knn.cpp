#include "dfb/classify/classifier.hpp"
#include "dfb/error.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace dfb {

KnnModel fit_knn(const FeatureMatrix& x, std::size_t k) {
    if (x.rows == 0) throw Error(ErrorKind::InvalidArgument, "kNN needs at least one training row");
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "kNN needs k >= 1");
    return KnnModel{k, x.values, x.targets};
}

int predict_knn(const KnnModel& model, std::size_t dimension, std::span<const double> query) {
    const std::size_t n = model.targets.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = model.points.data() + i * dimension;
        double d2 = 0.0;
        for (std::size_t j = 0; j < dimension; ++j) {
            const double d = p[j] - query[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    const std::size_t k = std::min(model.k, n);
    // (distance, index) ordering: equidistant rows resolve to the earlier row.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t votes[2] = {0, 0};
    for (std::size_t i = 0; i < k; ++i) ++votes[model.targets[dist[i].second]];
    if (votes[0] == votes[1]) return model.targets[dist[0].second];
    return votes[1] > votes[0] ? 1 : 0;
}

} // namespace dfb

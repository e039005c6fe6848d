#include "dfb/classify/classifier.hpp"
#include "dfb/error.hpp"
#include "dfb/run_info.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dfb {
namespace {

constexpr std::string_view kMagic = "dfb-model";

void write_values(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_double(values[i]);
}

void write_tree(std::ostream& out, const Tree& tree) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes) {
        out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
            << format_double(n.value) << '\n';
    }
}

// Whitespace-separated token reader over the whole file.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::string_view token() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
        if (pos_ >= text_.size()) fail("unexpected end of model file");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void expect(std::string_view word) {
        const auto t = token();
        if (t != word) fail("expected '" + std::string(word) + "', found '" + std::string(t) + "'");
    }

    double real() { return parse_double(token()); }

    long long integer() {
        const auto t = token();
        long long v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) fail("not an integer: '" + std::string(t) + "'");
        return v;
    }

    std::size_t count(std::size_t limit = 100'000'000) {
        const long long v = integer();
        if (v < 0 || static_cast<unsigned long long>(v) > limit) fail("count out of range");
        return static_cast<std::size_t>(v);
    }

    std::vector<double> reals(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = real();
        return v;
    }

    std::string rest_of_line() {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] static void fail(const std::string& message) {
        throw Error(ErrorKind::DataValidation, "model file: " + message);
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

    std::string_view text_;
    std::size_t pos_ = 0;
};

Tree read_tree(Reader& in) {
    in.expect("tree");
    Tree tree;
    tree.nodes.resize(in.count());
    const auto n = static_cast<long long>(tree.nodes.size());
    for (long long i = 0; i < n; ++i) {
        TreeNode& node = tree.nodes[static_cast<std::size_t>(i)];
        node.feature = static_cast<int>(in.integer());
        node.threshold = in.real();
        node.left = static_cast<int>(in.integer());
        node.right = static_cast<int>(in.integer());
        node.value = in.real();
        // children always follow their parent, which also rules out cycles
        if (node.feature >= 0 && (node.left <= i || node.right <= i || node.left >= n || node.right >= n)) {
            Reader::fail("tree node points outside the tree");
        }
    }
    if (tree.nodes.empty()) Reader::fail("empty tree");
    return tree;
}

ClassifierConfig parse_config(const std::string& line) {
    ClassifierConfig c;
    std::istringstream in(line);
    std::string pair;
    while (in >> pair) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) Reader::fail("malformed config entry '" + pair + "'");
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        auto as_size = [&] { return static_cast<std::size_t>(std::stoull(value)); };
        try {
            if (key == "family") c.family = parse_family(value);
            else if (key == "k") c.k = as_size();
            else if (key == "kernel") c.svm.kernel = parse_kernel(value);
            else if (key == "c") c.svm.c = parse_double(value);
            else if (key == "tol") c.svm.tolerance = parse_double(value);
            else if (key == "max_passes") c.svm.max_passes = as_size();
            else if (key == "degree") c.svm.degree = std::stoi(value);
            else if (key == "coef0") c.svm.coef0 = parse_double(value);
            else if (key == "trees") c.forest.trees = as_size();
            else if (key == "max_features") c.forest.max_features = as_size();
            else if (key == "rounds") c.boost.rounds = as_size();
            else if (key == "depth") c.boost.depth = as_size();
            else if (key == "learning_rate") c.boost.learning_rate = parse_double(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else Reader::fail("unknown config key '" + key + "'");
        } catch (const std::logic_error&) {
            Reader::fail("bad value for config key '" + key + "'");
        } catch (const Error& e) {
            Reader::fail(e.what());
        }
    }
    return c;
}

} // namespace

std::string serialize(const TrainedModel& model) {
    std::ostringstream out;
    const std::size_t d = model.dimension;
    out << kMagic << ' ' << TrainedModel::kSchemaVersion << '\n';
    out << "family " << to_string(model.config.family) << '\n';
    out << "config " << model.config.describe() << '\n';
    out << "dimension " << d << '\n';
    struct Writer {
        std::ostream& out;
        std::size_t d;
        void operator()(const KnnModel& m) const {
            out << "knn k " << m.k << " rows " << m.targets.size() << '\n';
            for (std::size_t i = 0; i < m.targets.size(); ++i) {
                out << m.targets[i] << ' ';
                write_values(out, {m.points.data() + i * d, d});
                out << '\n';
            }
        }
        void operator()(const SvmModel& m) const {
            out << "svm kernel " << to_string(m.kernel.kind) << " gamma " << format_double(m.kernel.gamma)
                << " degree " << m.kernel.degree << " coef0 " << format_double(m.kernel.coef0) << " rho "
                << format_double(m.rho) << " support " << m.coef.size() << '\n';
            for (std::size_t s = 0; s < m.coef.size(); ++s) {
                out << format_double(m.coef[s]) << ' ';
                write_values(out, {m.support.data() + s * d, d});
                out << '\n';
            }
        }
        void operator()(const LdaModel& m) const {
            out << "lda bias " << format_double(m.bias) << "\nmean0 ";
            write_values(out, m.mean0);
            out << "\nmean1 ";
            write_values(out, m.mean1);
            out << "\nweights ";
            write_values(out, m.weights);
            out << '\n';
        }
        void operator()(const TreeModel& m) const {
            out << "decision_tree\n";
            write_tree(out, m.tree);
        }
        void operator()(const ForestModel& m) const {
            out << "forest trees " << m.trees.size() << '\n';
            for (const auto& t : m.trees) write_tree(out, t);
        }
        void operator()(const BoostModel& m) const {
            out << "boost init " << format_double(m.initial_score) << " learning_rate "
                << format_double(m.learning_rate) << " trees " << m.trees.size() << '\n';
            for (const auto& t : m.trees) write_tree(out, t);
        }
    };
    std::visit(Writer{out, d}, model.payload);
    out << "end\n";
    return out.str();
}

TrainedModel deserialize(std::string_view text) {
    Reader in(text);
    in.expect(kMagic);
    const long long version = in.integer();
    if (version != TrainedModel::kSchemaVersion) {
        Reader::fail("unsupported schema version " + std::to_string(version));
    }
    TrainedModel model;
    in.expect("family");
    const Family family = [&] {
        try {
            return parse_family(in.token());
        } catch (const Error& e) {
            Reader::fail(e.what());
        }
    }();
    in.expect("config");
    model.config = parse_config(in.rest_of_line());
    if (model.config.family != family) Reader::fail("family line disagrees with config");
    in.expect("dimension");
    model.dimension = in.count(1'000'000);
    const std::size_t d = model.dimension;

    const auto kind = in.token();
    if (kind == "knn" && family == Family::Knn) {
        KnnModel m;
        in.expect("k");
        m.k = in.count();
        in.expect("rows");
        const std::size_t n = in.count();
        for (std::size_t i = 0; i < n; ++i) {
            const long long t = in.integer();
            if (t != 0 && t != 1) Reader::fail("kNN target must be 0 or 1");
            m.targets.push_back(static_cast<int>(t));
            const auto v = in.reals(d);
            m.points.insert(m.points.end(), v.begin(), v.end());
        }
        if (m.k == 0 || n == 0) Reader::fail("empty kNN model");
        model.payload = std::move(m);
    } else if (kind == "svm" && family == Family::Svm) {
        SvmModel m;
        in.expect("kernel");
        try {
            m.kernel.kind = parse_kernel(in.token());
        } catch (const Error& e) {
            Reader::fail(e.what());
        }
        in.expect("gamma");
        m.kernel.gamma = in.real();
        in.expect("degree");
        m.kernel.degree = static_cast<int>(in.integer());
        in.expect("coef0");
        m.kernel.coef0 = in.real();
        in.expect("rho");
        m.rho = in.real();
        in.expect("support");
        const std::size_t n = in.count();
        for (std::size_t s = 0; s < n; ++s) {
            m.coef.push_back(in.real());
            const auto v = in.reals(d);
            m.support.insert(m.support.end(), v.begin(), v.end());
        }
        model.payload = std::move(m);
    } else if (kind == "lda" && family == Family::Lda) {
        LdaModel m;
        in.expect("bias");
        m.bias = in.real();
        in.expect("mean0");
        m.mean0 = in.reals(d);
        in.expect("mean1");
        m.mean1 = in.reals(d);
        in.expect("weights");
        m.weights = in.reals(d);
        model.payload = std::move(m);
    } else if (kind == "decision_tree" && family == Family::DecisionTree) {
        model.payload = TreeModel{read_tree(in)};
    } else if (kind == "forest" && family == Family::RandomForest) {
        ForestModel m;
        in.expect("trees");
        const std::size_t n = in.count();
        for (std::size_t t = 0; t < n; ++t) m.trees.push_back(read_tree(in));
        model.payload = std::move(m);
    } else if (kind == "boost" && family == Family::GBoost) {
        BoostModel m;
        in.expect("init");
        m.initial_score = in.real();
        in.expect("learning_rate");
        m.learning_rate = in.real();
        in.expect("trees");
        const std::size_t n = in.count();
        for (std::size_t t = 0; t < n; ++t) m.trees.push_back(read_tree(in));
        model.payload = std::move(m);
    } else {
        Reader::fail("payload '" + std::string(kind) + "' does not match family");
    }
    in.expect("end");
    // trees index features by position; reject ones outside the dimension
    auto check_tree = [&](const Tree& t) {
        for (const auto& n : t.nodes) {
            if (n.feature >= static_cast<int>(d)) Reader::fail("tree feature index out of range");
        }
    };
    if (auto* t = std::get_if<TreeModel>(&model.payload)) check_tree(t->tree);
    if (auto* f = std::get_if<ForestModel>(&model.payload)) for (const auto& t : f->trees) check_tree(t);
    if (auto* b = std::get_if<BoostModel>(&model.payload)) for (const auto& t : b->trees) check_tree(t);
    return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
    out << serialize(model);
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open model " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

} // namespace dfb

#include <mlcc/instance.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mlcc {

namespace {
constexpr double kValidationTol = 1e-9;
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::general: return "general";
        case Mode::probability: return "probability";
        case Mode::probability_triangle: return "probability+triangle";
    }
    throw std::logic_error("unknown mode");
}

Mode mode_from_string(const std::string& s) {
    if (s == "general") return Mode::general;
    if (s == "probability") return Mode::probability;
    if (s == "probability+triangle") return Mode::probability_triangle;
    throw std::invalid_argument("unknown mode: " + s);
}

NormSpec NormSpec::lp(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p must be >= 1");
    if (p > kMaxFiniteP)
        throw std::invalid_argument("NormSpec: finite p capped at 64; use inf");
    return NormSpec(p, false);
}

NormSpec NormSpec::linf() { return NormSpec(0.0, true); }

NormSpec NormSpec::parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return linf();
    size_t pos = 0;
    double p = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("NormSpec: cannot parse '" + s + "'");
    return lp(p);
}

std::string NormSpec::str() const {
    if (inf_) return "inf";
    std::string s = format_double(p_);
    return s;
}

double NormSpec::reduce(const Vector& values) const {
    if (values.size() == 0) return 0.0;
    if (inf_) return values.maxCoeff();
    if (p_ == 1.0) return values.sum();
    double acc = 0.0;
    for (Index i = 0; i < values.size(); ++i) acc += std::pow(values[i], p_);
    return std::pow(acc, 1.0 / p_);
}

MultilayerInstance::MultilayerInstance(Index n, Index num_layers, Mode mode)
    : n_(n), num_layers_(num_layers), mode_(mode), layers_(static_cast<size_t>(num_layers)) {
    if (n < 1) throw std::invalid_argument("instance: n must be positive");
    if (num_layers < 1) throw std::invalid_argument("instance: L must be positive");
}

void MultilayerInstance::check_layer(Index layer) const {
    if (layer < 0 || layer >= num_layers_)
        throw std::out_of_range("instance: layer index out of range");
}

void MultilayerInstance::set_weights(Index layer, Index u, Index v, double plus, double minus) {
    check_layer(layer);
    if (u == v) throw std::invalid_argument("instance: pair must have u != v");
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw std::out_of_range("instance: element id out of range");
    if (plus < 0.0 || minus < 0.0)
        throw std::invalid_argument("instance: weights must be nonnegative");
    if (u > v) std::swap(u, v);
    layers_[static_cast<size_t>(layer)][{u, v}] = PairWeights{plus, minus};
}

PairWeights MultilayerInstance::default_weights() const {
    return mode_ == Mode::general ? PairWeights{0.0, 0.0} : PairWeights{0.5, 0.5};
}

PairWeights MultilayerInstance::weights(Index layer, Index u, Index v) const {
    check_layer(layer);
    if (u > v) std::swap(u, v);
    const auto& m = layers_[static_cast<size_t>(layer)];
    auto it = m.find({u, v});
    return it == m.end() ? default_weights() : it->second;
}

const MultilayerInstance::LayerMap& MultilayerInstance::stored(Index layer) const {
    check_layer(layer);
    return layers_[static_cast<size_t>(layer)];
}

double MultilayerInstance::layer_total_weight(Index layer) const {
    check_layer(layer);
    double total = 0.0;
    const auto& m = layers_[static_cast<size_t>(layer)];
    for (const auto& [key, w] : m) total += w.plus + w.minus;
    const PairWeights def = default_weights();
    total += (def.plus + def.minus) * static_cast<double>(num_pairs() - static_cast<Index>(m.size()));
    return total;
}

Clustering::Clustering(std::vector<int> assignment) : assign_(std::move(assignment)) {
    if (assign_.empty()) throw std::invalid_argument("clustering: empty assignment");
    int max_id = 0;
    for (int a : assign_) {
        if (a < 0) throw std::invalid_argument("clustering: cluster id must be nonnegative");
        max_id = std::max(max_id, a);
    }
    // Relabel by first appearance so ids are contiguous and canonical.
    std::vector<int> relabel(static_cast<size_t>(max_id) + 1, -1);
    int next = 0;
    for (int& a : assign_) {
        if (relabel[static_cast<size_t>(a)] < 0) relabel[static_cast<size_t>(a)] = next++;
        a = relabel[static_cast<size_t>(a)];
    }
    num_clusters_ = next;
}

Clustering Clustering::singletons(Index n) {
    std::vector<int> a(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) a[static_cast<size_t>(i)] = static_cast<int>(i);
    return Clustering(std::move(a));
}

Clustering Clustering::one_cluster(Index n) {
    return Clustering(std::vector<int>(static_cast<size_t>(n), 0));
}

Clustering Clustering::from_clusters(Index n, const std::vector<std::vector<int>>& clusters) {
    std::vector<int> a(static_cast<size_t>(n), -1);
    int id = 0;
    for (const auto& cluster : clusters) {
        for (int v : cluster) {
            if (v < 0 || v >= n) throw std::invalid_argument("clustering: element out of range");
            if (a[static_cast<size_t>(v)] != -1)
                throw std::invalid_argument("clustering: element in two clusters");
            a[static_cast<size_t>(v)] = id;
        }
        ++id;
    }
    for (int x : a)
        if (x == -1) throw std::invalid_argument("clustering: element missing from partition");
    return Clustering(std::move(a));
}

std::vector<std::vector<int>> Clustering::clusters() const {
    std::vector<std::vector<int>> out(static_cast<size_t>(num_clusters_));
    for (size_t v = 0; v < assign_.size(); ++v)
        out[static_cast<size_t>(assign_[v])].push_back(static_cast<int>(v));
    return out;
}

std::vector<Violation> validate(const MultilayerInstance& instance) {
    std::vector<Violation> out;
    const Index n = instance.n();
    const Index L = instance.num_layers();
    auto describe = [](Index layer, Index u, Index v) {
        std::ostringstream os;
        os << "layer " << layer << " pair (" << u << "," << v << ")";
        return os.str();
    };

    for (Index ell = 0; ell < L; ++ell) {
        if (instance.mode() == Mode::general) {
            for (const auto& [key, w] : instance.stored(ell)) {
                if (std::min(w.plus, w.minus) > 0.0) {
                    out.push_back({Violation::Kind::coexistence, ell, key.first, key.second, -1,
                                   describe(ell, key.first, key.second) +
                                       ": both labels nonzero (min(w+,w-) != 0)"});
                }
            }
        } else {
            for (Index u = 0; u < n; ++u) {
                for (Index v = u + 1; v < n; ++v) {
                    PairWeights w = instance.weights(ell, u, v);
                    if (std::abs(w.plus + w.minus - 1.0) > kValidationTol) {
                        out.push_back({Violation::Kind::probability_sum, ell, u, v, -1,
                                       describe(ell, u, v) + ": w+ + w- = " +
                                           format_double(w.plus + w.minus) + " != 1"});
                    }
                }
            }
        }
        if (instance.mode() == Mode::probability_triangle) {
            for (Index u = 0; u < n; ++u) {
                for (Index v = 0; v < n; ++v) {
                    if (v == u) continue;
                    for (Index w = 0; w < n; ++w) {
                        if (w == u || w == v || u > w) continue;
                        double duw = instance.weights(ell, u, w).minus;
                        double duv = instance.weights(ell, u, v).minus;
                        double dvw = instance.weights(ell, v, w).minus;
                        if (duw > duv + dvw + kValidationTol) {
                            std::ostringstream os;
                            os << "layer " << ell << " triple (" << u << "," << v << "," << w
                               << "): w-(u,w) > w-(u,v) + w-(v,w)";
                            out.push_back({Violation::Kind::triangle, ell, u, v, w, os.str()});
                        }
                    }
                }
            }
        }
    }
    return out;
}

double disagreement(const MultilayerInstance& instance, const Clustering& clustering,
                    Index layer) {
    if (layer < 0 || layer >= instance.num_layers())
        throw std::out_of_range("disagreement: layer index out of range");
    if (clustering.n() != instance.n())
        throw std::invalid_argument("disagreement: clustering size mismatch");
    double total = 0.0;
    const auto& stored = instance.stored(layer);
    for (const auto& [key, w] : stored) {
        const bool together = clustering.same_cluster(key.first, key.second);
        total += together ? w.minus : w.plus;
    }
    // Unlisted pairs carry the mode default; (0.5,0.5) charges 0.5 either way.
    const PairWeights def = instance.default_weights();
    if (def.plus != 0.0 || def.minus != 0.0) {
        const Index unlisted = instance.num_pairs() - static_cast<Index>(stored.size());
        total += def.plus * static_cast<double>(unlisted);  // def.plus == def.minus
    }
    return total;
}

Vector disagreement_vector(const MultilayerInstance& instance, const Clustering& clustering) {
    Vector d(instance.num_layers());
    for (Index ell = 0; ell < instance.num_layers(); ++ell)
        d[ell] = disagreement(instance, clustering, ell);
    return d;
}

double objective(const MultilayerInstance& instance, const Clustering& clustering,
                 const NormSpec& norm) {
    return norm.reduce(disagreement_vector(instance, clustering));
}

CanonicalizeResult canonicalize_general(const MultilayerInstance& instance) {
    if (instance.mode() != Mode::general)
        throw std::invalid_argument("canonicalize_general: requires general mode");
    MultilayerInstance out(instance.n(), instance.num_layers(), Mode::general);
    Vector offsets = Vector::Zero(instance.num_layers());
    for (Index ell = 0; ell < instance.num_layers(); ++ell) {
        for (const auto& [key, w] : instance.stored(ell)) {
            const double shift = std::min(w.plus, w.minus);
            offsets[ell] += shift;
            const double plus = w.plus - shift;
            const double minus = w.minus - shift;
            if (plus != 0.0 || minus != 0.0)
                out.set_weights(ell, key.first, key.second, plus, minus);
        }
    }
    return {std::move(out), std::move(offsets)};
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_instance(const MultilayerInstance& instance, std::ostream& out) {
    out << "mlcc " << to_string(instance.mode()) << " n=" << instance.n()
        << " L=" << instance.num_layers() << "\n";
    for (Index ell = 0; ell < instance.num_layers(); ++ell) {
        for (const auto& [key, w] : instance.stored(ell)) {
            out << ell << ' ' << key.first << ' ' << key.second << ' '
                << format_double(w.plus) << ' ' << format_double(w.minus) << "\n";
        }
    }
}

void write_instance_file(const MultilayerInstance& instance, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_instance(instance, f);
}

MultilayerInstance read_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("instance parse error at line " + std::to_string(line_no) +
                                 ": " + msg);
    };

    // Header: first non-comment, non-blank line.
    std::string header;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) {
            header = line;
            break;
        }
    }
    if (header.empty()) throw std::runtime_error("instance parse error: missing header");

    std::istringstream hs(header);
    std::string magic, mode_str, n_str, l_str;
    if (!(hs >> magic >> mode_str >> n_str >> l_str) || magic != "mlcc")
        fail("expected 'mlcc <mode> n=<n> L=<L>'");
    if (n_str.rfind("n=", 0) != 0 || l_str.rfind("L=", 0) != 0)
        fail("expected n=<n> and L=<L> fields");
    const Index n = std::stoll(n_str.substr(2));
    const Index L = std::stoll(l_str.substr(2));
    MultilayerInstance instance(n, L, mode_from_string(mode_str));

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Index ell, u, v;
        double plus, minus;
        if (!(ls >> ell)) continue;  // blank or comment-only
        if (!(ls >> u >> v >> plus >> minus)) fail("expected '<layer> <u> <v> <w+> <w->'");
        std::string extra;
        if (ls >> extra) fail("trailing tokens");
        try {
            instance.set_weights(ell, u, v, plus, minus);
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    return instance;
}

MultilayerInstance read_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open instance file: " + path);
    return read_instance(f);
}

}  // namespace mlcc

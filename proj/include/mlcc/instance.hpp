#pragma once

#include <mlcc/types.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mlcc {

enum class Mode { general, probability, probability_triangle };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// The l_p norm used to reduce the disagreement vector. Finite exponents are
/// capped at 64: minimizers are unchanged by working in the power domain and
/// larger exponents overflow doubles on instances of any size.
class NormSpec {
public:
    static constexpr double kMaxFiniteP = 64.0;

    static NormSpec lp(double p);
    static NormSpec linf();
    static NormSpec parse(const std::string& s);  // "1", "2.5", ..., "inf"

    bool is_inf() const { return inf_; }
    double p() const { return p_; }
    std::string str() const;

    double reduce(const Vector& values) const;

private:
    NormSpec(double p, bool inf) : p_(p), inf_(inf) {}
    double p_ = 1.0;
    bool inf_ = false;
};

struct PairWeights {
    double plus = 0.0;
    double minus = 0.0;
};

/// One constraint violation found by validate(); data, not a failure.
struct Violation {
    enum class Kind { coexistence, probability_sum, triangle };
    Kind kind;
    Index layer;
    Index u, v, w;  // w = -1 unless kind == triangle
    std::string message;
};

/// Element set {0..n-1} with per-layer '+'/'-' weights over unordered pairs.
/// Storage is sparse; an absent pair means (0,0) in general mode and
/// (0.5,0.5) in the probability modes. Immutable once built; all operations
/// below are pure.
class MultilayerInstance {
public:
    using PairKey = std::pair<Index, Index>;
    using LayerMap = std::map<PairKey, PairWeights>;

    MultilayerInstance(Index n, Index num_layers, Mode mode);

    Index n() const { return n_; }
    Index num_layers() const { return num_layers_; }
    Mode mode() const { return mode_; }
    Index num_pairs() const { return n_ * (n_ - 1) / 2; }

    void set_weights(Index layer, Index u, Index v, double plus, double minus);

    PairWeights weights(Index layer, Index u, Index v) const;
    PairWeights default_weights() const;
    const LayerMap& stored(Index layer) const;

    /// Sum of w+ + w- over all pairs of a layer, defaults included.
    double layer_total_weight(Index layer) const;

private:
    void check_layer(Index layer) const;

    Index n_;
    Index num_layers_;
    Mode mode_;
    std::vector<LayerMap> layers_;
};

/// A partition of {0..n-1}. Cluster ids are always contiguous and ordered by
/// first appearance, so clusters are implicitly sorted by minimum element.
class Clustering {
public:
    explicit Clustering(std::vector<int> assignment);
    static Clustering singletons(Index n);
    static Clustering one_cluster(Index n);
    static Clustering from_clusters(Index n, const std::vector<std::vector<int>>& clusters);

    Index n() const { return static_cast<Index>(assign_.size()); }
    int num_clusters() const { return num_clusters_; }
    int cluster_of(Index v) const { return assign_[static_cast<size_t>(v)]; }
    bool same_cluster(Index u, Index v) const { return assign_[u] == assign_[v]; }
    const std::vector<int>& assignment() const { return assign_; }
    std::vector<std::vector<int>> clusters() const;

    friend bool operator==(const Clustering& a, const Clustering& b) {
        return a.assign_ == b.assign_;
    }
    friend auto operator<=>(const Clustering& a, const Clustering& b) {
        return a.assign_ <=> b.assign_;
    }

private:
    std::vector<int> assign_;
    int num_clusters_ = 0;
};

std::vector<Violation> validate(const MultilayerInstance& instance);

double disagreement(const MultilayerInstance& instance, const Clustering& clustering,
                    Index layer);

Vector disagreement_vector(const MultilayerInstance& instance, const Clustering& clustering);

double objective(const MultilayerInstance& instance, const Clustering& clustering,
                 const NormSpec& norm);

struct CanonicalizeResult {
    MultilayerInstance instance;
    Vector offsets;  // per layer: disagreement_orig = disagreement_canon + offset
};

/// Shifts min(w+,w-) off every pair so at most one label is nonzero per pair.
CanonicalizeResult canonicalize_general(const MultilayerInstance& instance);

// Line-oriented instance file format; see README. Round-trips bit exactly.
void write_instance(const MultilayerInstance& instance, std::ostream& out);
void write_instance_file(const MultilayerInstance& instance, const std::string& path);
MultilayerInstance read_instance(std::istream& in);
MultilayerInstance read_instance_file(const std::string& path);

/// Formats a double with 17 significant digits (lossless decimal round-trip).
std::string format_double(double value);

}  // namespace mlcc

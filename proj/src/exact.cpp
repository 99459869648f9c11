#include <mlcc/exact.hpp>

#include <string>

namespace mlcc {

void for_each_partition(Index n, const std::function<void(const std::vector<int>&)>& visit,
                        const Deadline& deadline) {
    if (n < 1) throw std::invalid_argument("for_each_partition: n must be positive");
    const size_t un = static_cast<size_t>(n);
    // Restricted growth string a with cap b[i] = 1 + max(a[0..i-1]).
    std::vector<int> a(un, 0);
    std::vector<int> b(un, 1);
    std::uint64_t count = 0;
    while (true) {
        if ((++count & 1023ull) == 0) deadline.check();
        visit(a);
        size_t j = 0;
        for (size_t i = un; i-- > 1;) {
            if (a[i] < b[i]) {
                j = i;
                break;
            }
        }
        if (j == 0) return;  // lexicographically last RGS visited
        ++a[j];
        for (size_t k = j + 1; k < un; ++k) {
            a[k] = 0;
            b[k] = std::max(b[k - 1], a[k - 1] + 1);
        }
    }
}

namespace {

ExactResult brute_force_impl(const MultilayerInstance& instance,
                             const std::function<double(const Clustering&)>& value_of,
                             Index n_cap, const Deadline& deadline) {
    if (instance.n() > n_cap)
        throw std::invalid_argument("brute_force: n exceeds cap of " + std::to_string(n_cap));
    ExactResult result;
    bool first = true;
    for_each_partition(
        instance.n(),
        [&](const std::vector<int>& rgs) {
            ++result.partitions_visited;
            Clustering c(rgs);
            const double value = value_of(c);
            if (first || value < result.opt_value) {
                first = false;
                result.opt_value = value;
                result.opt_clusterings.clear();
                result.opt_clusterings.push_back(std::move(c));
            } else if (value == result.opt_value) {
                result.opt_clusterings.push_back(std::move(c));
            }
        },
        deadline);
    return result;
}

}  // namespace

ExactResult brute_force(const MultilayerInstance& instance, const NormSpec& norm, Index n_cap,
                        const Deadline& deadline) {
    return brute_force_impl(
        instance, [&](const Clustering& c) { return objective(instance, c, norm); }, n_cap,
        deadline);
}

ExactResult brute_force_layer(const MultilayerInstance& instance, Index layer, Index n_cap,
                              const Deadline& deadline) {
    return brute_force_impl(
        instance, [&](const Clustering& c) { return disagreement(instance, c, layer); }, n_cap,
        deadline);
}

}  // namespace mlcc

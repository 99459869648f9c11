#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace mlcc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Maps unordered pairs {u,v} of 0..n-1 onto dense indices 0..n(n-1)/2-1,
/// row-major over u < v.
struct PairIndexer {
    Index n = 0;

    explicit PairIndexer(Index n_) : n(n_) {}

    Index size() const { return n * (n - 1) / 2; }

    Index operator()(Index u, Index v) const {
        if (u == v || u < 0 || v < 0 || u >= n || v >= n)
            throw std::out_of_range("PairIndexer: invalid pair");
        if (u > v) std::swap(u, v);
        return u * n - u * (u + 1) / 2 + (v - u - 1);
    }

    std::pair<Index, Index> unpack(Index idx) const {
        Index u = 0;
        Index row = n - 1;
        while (idx >= row) {
            idx -= row;
            --row;
            ++u;
        }
        return {u, u + 1 + idx};
    }
};

}  // namespace mlcc

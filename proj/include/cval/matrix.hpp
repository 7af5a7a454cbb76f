#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cval {

struct InvalidDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major n x p feature matrix.
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(std::size_t n, std::size_t p) : n_(n), p_(p), values_(n * p, 0.0) {}
    DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
        : n_(n), p_(p), values_(std::move(values)) {
        if (values_.size() != n * p) throw InvalidDataError("DataMatrix: size mismatch");
    }

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return p_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * p_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * p_ + j]; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * p_, p_}; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // Rows selected by index, in the given order.
    DataMatrix subset(std::span<const int> idx) const {
        DataMatrix out(idx.size(), p_);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < p_; ++c) out(r, c) = (*this)(idx[r], c);
        return out;
    }

private:
    std::size_t n_ = 0, p_ = 0;
    std::vector<double> values_;
};

// Dense symmetric dissimilarity matrix with zero diagonal.  Stored as a full
// n x n block so that arbitrary pair lookups stay a single index computation.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    explicit DissimilarityMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidDataError("dissimilarity must be finite and nonnegative");
        if (i == j) {
            if (v != 0.0) throw InvalidDataError("diagonal must be zero");
            return;
        }
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

    std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }

    DissimilarityMatrix subset(std::span<const int> idx) const {
        DissimilarityMatrix out(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                out.set(a, b, (*this)(idx[a], idx[b]));
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

DissimilarityMatrix euclidean_dissimilarity(const DataMatrix& data);

}  // namespace cval

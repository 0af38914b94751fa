/*==============================================================================
 *     File: banded.h
 *
 *  Description: Banded matrices and an LU factorization with partial pivoting
 *               restricted to the band (the pivoted upper factor widens to
 *               lower_bw + upper_bw super-diagonals).
 *
 *============================================================================*/

#pragma once

#include <span>
#include <vector>

#include "mfu/dense.h"
#include "mfu/types.h"

namespace mfu {

/// Square banded matrix. Entry (i,j) lives at data[i*(kl+ku+1) + (j-i+kl)],
/// i.e. every diagonal offset occupies one slot per row.
template <typename T>
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(Index n, Index lower_bw, Index upper_bw);

    Index size() const { return n_; }
    Index lowerBandwidth() const { return kl_; }
    Index upperBandwidth() const { return ku_; }

    bool inBand(Index i, Index j) const { return j - i >= -kl_ && j - i <= ku_; }

    /// Out-of-band reads return zero; out-of-band writes throw.
    T operator()(Index i, Index j) const;
    T& ref(Index i, Index j);
    void set(Index i, Index j, T v) { ref(i, j) = v; }

    template <typename U>
    std::vector<promote_t<T, U>> multiply(std::span<const U> x) const;

    DenseMatrix<T> toDense() const;
    double infNorm() const;

    /// this*s + other*t on the union of the two bands.
    template <typename S>
    BandedMatrix<promote_t<T, S>> axpby(T s, const BandedMatrix<S>& other, promote_t<T, S> t) const;

    const std::vector<T>& data() const { return data_; }

private:
    Index n_ = 0;
    Index kl_ = 0;
    Index ku_ = 0;
    std::vector<T> data_;
};

BandedMatrix<cplx> toComplex(const BandedMatrix<double>& B);

/// gbtrf-style factorization, PA = LU, pivots searched within the kl rows
/// below the diagonal.
template <typename T>
class BandedLU {
public:
    BandedLU() = default;
    explicit BandedLU(const BandedMatrix<T>& A);

    Index size() const { return n_; }

    template <typename U>
    std::vector<promote_t<T, U>> solve(std::span<const U> b) const;

private:
    Index n_ = 0;
    Index kl_ = 0;
    Index width_ = 0;        // entries stored per row: columns [i-kl, i+kl+ku]
    std::vector<T> lu_;      // row i starts at column i-kl
    std::vector<Index> ipiv_;

    T& at(Index i, Index j) { return lu_[i * width_ + (j - i + kl_)]; }
    const T& at(Index i, Index j) const { return lu_[i * width_ + (j - i + kl_)]; }
};

template <typename T, typename U>
std::vector<promote_t<T, U>> bandedSolve(const BandedMatrix<T>& M, std::span<const U> b)
{
    return BandedLU<T>(M).solve(b);
}

}  // namespace mfu

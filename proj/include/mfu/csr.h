/*==============================================================================
 *     File: csr.h
 *
 *  Description: Compressed sparse row matrix over double or complex<double>.
 *
 *============================================================================*/

#pragma once

#include <span>
#include <vector>

#include "mfu/dense.h"
#include "mfu/types.h"

namespace mfu {

template <typename T>
struct Triplet {
    Index row;
    Index col;
    T value;
};

template <typename T>
class CsrMatrix {
public:
    using value_type = T;

    CsrMatrix() = default;

    /// Takes ownership of the three CSR arrays and validates them: monotone row
    /// offsets, in-range and strictly increasing column indices per row.
    CsrMatrix(Index rows, Index cols, std::vector<Index> row_starts, std::vector<Index> col_indices,
              std::vector<T> values);

    /// Builds from unsorted coordinates; duplicates are summed.
    static CsrMatrix fromTriplets(Index rows, Index cols, std::vector<Triplet<T>> entries);
    static CsrMatrix identity(Index n);
    static CsrMatrix diagonal(std::span<const T> d);
    /// Entries with |a_ij| <= drop are skipped (drop < 0 keeps explicit zeros).
    static CsrMatrix fromDense(const DenseMatrix<T>& A, double drop = 0.0);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& rowStarts() const { return row_starts_; }
    const std::vector<Index>& colIndices() const { return col_indices_; }
    const std::vector<T>& values() const { return values_; }

    /// Stored value at (i, j), zero if the position is structurally empty.
    T at(Index i, Index j) const;

    DenseMatrix<T> toDense() const;
    std::vector<T> diagonalValues() const;

    /// Largest i-j (resp. j-i) over stored entries.
    Index lowerBandwidth() const;
    Index upperBandwidth() const;
    Index bandwidth() const;

    bool isSquare() const { return rows_ == cols_; }
    bool isUpperTriangular() const;
    bool isLowerTriangular() const;

    double frobeniusNorm() const;
    double infNorm() const;
    double rowInfNorm(Index i) const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<Index> row_starts_{0};
    std::vector<Index> col_indices_;
    std::vector<T> values_;
};

CsrMatrix<cplx> toComplex(const CsrMatrix<double>& A);

}  // namespace mfu

#include "mfu/csr.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfu {

template <typename T>
CsrMatrix<T>::CsrMatrix(Index rows, Index cols, std::vector<Index> row_starts,
                        std::vector<Index> col_indices, std::vector<T> values)
    : rows_(rows),
      cols_(cols),
      row_starts_(std::move(row_starts)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values))
{
    if (rows < 0 || cols < 0) throw DimensionError("csr: negative dimension");
    if (static_cast<Index>(row_starts_.size()) != rows + 1)
        throw FormatError("csr: row_starts must have n_rows+1 entries");
    if (row_starts_.front() != 0) throw FormatError("csr: row_starts[0] must be 0");
    if (col_indices_.size() != values_.size()) throw FormatError("csr: index/value length mismatch");
    if (row_starts_.back() != static_cast<Index>(values_.size()))
        throw FormatError("csr: row_starts[n_rows] must equal nnz");
    for (Index i = 0; i < rows; i++) {
        if (row_starts_[i + 1] < row_starts_[i]) throw FormatError("csr: row_starts not monotone");
        for (Index p = row_starts_[i]; p < row_starts_[i + 1]; p++) {
            const Index j = col_indices_[p];
            if (j < 0 || j >= cols) throw FormatError("csr: column index out of range in row " + std::to_string(i));
            if (p > row_starts_[i] && col_indices_[p - 1] >= j)
                throw FormatError("csr: column indices not strictly increasing in row " + std::to_string(i));
        }
    }
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::fromTriplets(Index rows, Index cols, std::vector<Triplet<T>> entries)
{
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw DimensionError("triplet (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet<T>& a, const Triplet<T>& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Index> rs(rows + 1, 0), ci;
    std::vector<T> vals;
    ci.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); k++) {
        const auto& e = entries[k];
        if (!ci.empty() && k > 0 && entries[k - 1].row == e.row && ci.back() == e.col) {
            vals.back() += e.value;
            continue;
        }
        ci.push_back(e.col);
        vals.push_back(e.value);
        rs[e.row + 1]++;
    }
    for (Index i = 0; i < rows; i++) rs[i + 1] += rs[i];
    return CsrMatrix(rows, cols, std::move(rs), std::move(ci), std::move(vals));
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::identity(Index n)
{
    std::vector<T> d(n, T{1});
    return diagonal(d);
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::diagonal(std::span<const T> d)
{
    const auto n = static_cast<Index>(d.size());
    std::vector<Index> rs(n + 1), ci(n);
    for (Index i = 0; i < n; i++) {
        rs[i + 1] = i + 1;
        ci[i] = i;
    }
    return CsrMatrix(n, n, std::move(rs), std::move(ci), std::vector<T>(d.begin(), d.end()));
}

template <typename T>
CsrMatrix<T> CsrMatrix<T>::fromDense(const DenseMatrix<T>& A, double drop)
{
    std::vector<Index> rs(A.rows() + 1, 0), ci;
    std::vector<T> vals;
    for (Index i = 0; i < A.rows(); i++) {
        for (Index j = 0; j < A.cols(); j++) {
            if (drop >= 0.0 && std::abs(A(i, j)) <= drop) continue;
            ci.push_back(j);
            vals.push_back(A(i, j));
        }
        rs[i + 1] = static_cast<Index>(ci.size());
    }
    return CsrMatrix(A.rows(), A.cols(), std::move(rs), std::move(ci), std::move(vals));
}

template <typename T>
T CsrMatrix<T>::at(Index i, Index j) const
{
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("csr at: index out of range");
    auto first = col_indices_.begin() + row_starts_[i];
    auto last = col_indices_.begin() + row_starts_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return T{};
    return values_[it - col_indices_.begin()];
}

template <typename T>
DenseMatrix<T> CsrMatrix<T>::toDense() const
{
    DenseMatrix<T> D(rows_, cols_);
    for (Index i = 0; i < rows_; i++)
        for (Index p = row_starts_[i]; p < row_starts_[i + 1]; p++) D(i, col_indices_[p]) = values_[p];
    return D;
}

template <typename T>
std::vector<T> CsrMatrix<T>::diagonalValues() const
{
    std::vector<T> d(std::min(rows_, cols_));
    for (Index i = 0; i < static_cast<Index>(d.size()); i++) d[i] = at(i, i);
    return d;
}

template <typename T>
Index CsrMatrix<T>::lowerBandwidth() const
{
    Index bw = 0;
    for (Index i = 0; i < rows_; i++)
        if (row_starts_[i + 1] > row_starts_[i]) bw = std::max(bw, i - col_indices_[row_starts_[i]]);
    return bw;
}

template <typename T>
Index CsrMatrix<T>::upperBandwidth() const
{
    Index bw = 0;
    for (Index i = 0; i < rows_; i++)
        if (row_starts_[i + 1] > row_starts_[i]) bw = std::max(bw, col_indices_[row_starts_[i + 1] - 1] - i);
    return bw;
}

template <typename T>
Index CsrMatrix<T>::bandwidth() const
{
    return std::max(lowerBandwidth(), upperBandwidth());
}

template <typename T>
bool CsrMatrix<T>::isUpperTriangular() const
{
    for (Index i = 0; i < rows_; i++)
        if (row_starts_[i + 1] > row_starts_[i] && col_indices_[row_starts_[i]] < i) return false;
    return true;
}

template <typename T>
bool CsrMatrix<T>::isLowerTriangular() const
{
    for (Index i = 0; i < rows_; i++)
        if (row_starts_[i + 1] > row_starts_[i] && col_indices_[row_starts_[i + 1] - 1] > i) return false;
    return true;
}

template <typename T>
double CsrMatrix<T>::frobeniusNorm() const
{
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s);
}

template <typename T>
double CsrMatrix<T>::rowInfNorm(Index i) const
{
    double s = 0.0;
    for (Index p = row_starts_[i]; p < row_starts_[i + 1]; p++) s = std::max(s, static_cast<double>(std::abs(values_[p])));
    return s;
}

template <typename T>
double CsrMatrix<T>::infNorm() const
{
    double best = 0.0;
    for (Index i = 0; i < rows_; i++) {
        double s = 0.0;
        for (Index p = row_starts_[i]; p < row_starts_[i + 1]; p++) s += std::abs(values_[p]);
        best = std::max(best, s);
    }
    return best;
}

CsrMatrix<cplx> toComplex(const CsrMatrix<double>& A)
{
    std::vector<cplx> vals(A.values().begin(), A.values().end());
    return CsrMatrix<cplx>(A.rows(), A.cols(), A.rowStarts(), A.colIndices(), std::move(vals));
}

template class CsrMatrix<double>;
template class CsrMatrix<cplx>;

}  // namespace mfu

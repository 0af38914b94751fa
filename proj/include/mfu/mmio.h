/*==============================================================================
 *     File: mmio.h
 *
 *  Description: Matrix Market coordinate reader/writer (real and complex
 *               fields, general and symmetric/hermitian symmetry).
 *
 *============================================================================*/

#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "mfu/csr.h"

namespace mfu {

using AnyCsr = std::variant<CsrMatrix<double>, CsrMatrix<cplx>>;

AnyCsr readMatrixMarket(const std::string& path);
AnyCsr readMatrixMarket(std::istream& in);

/// Reads a real file as real, or a complex file as complex; asking for a real
/// matrix from a complex file is an error (no silent downcast).
template <typename T>
CsrMatrix<T> readMatrixMarketAs(const std::string& path);

/// Always writes "general" symmetry with 17 significant digits.
template <typename T>
void writeMatrixMarket(const CsrMatrix<T>& A, const std::string& path);

template <typename T>
void writeMatrixMarket(const CsrMatrix<T>& A, std::ostream& out);

}  // namespace mfu

/*==============================================================================
 *     File: types.h
 *
 *  Description: Scalar aliases, traits and the error hierarchy shared by every
 *               module of the library.
 *
 *============================================================================*/

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace mfu {

using Index = std::int64_t;
using cplx = std::complex<double>;

template <typename T>
using Vector = std::vector<T>;

template <typename T>
struct is_complex : std::false_type {};

template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Scalar type of a mixed real/complex operation.
template <typename A, typename B>
using promote_t = std::conditional_t<is_complex_v<A> || is_complex_v<B>, cplx, double>;

template <typename T>
inline T conj_if(const T& x)
{
    if constexpr (is_complex_v<T>) {
        return std::conj(x);
    } else {
        return x;
    }
}

template <typename T>
inline double real_part(const T& x)
{
    if constexpr (is_complex_v<T>) {
        return x.real();
    } else {
        return x;
    }
}

/*------------------------------------------------------------------------------
 *         Errors
 *----------------------------------------------------------------------------*/
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

/// Parse or I/O problem (malformed Matrix Market file, unreadable path, ...).
struct FormatError : Error {
    using Error::Error;
};

/// Numerical failure that can be attributed to one row/column/pivot.
struct NumericalError : Error {
    NumericalError(const std::string& what, Index where) : Error(what), index(where) {}
    Index index;
};

struct SingularMatrixError : NumericalError {
    using NumericalError::NumericalError;
};

struct BreakdownError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace mfu

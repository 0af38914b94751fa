#include "mfu/mmio.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfu {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

AnyCsr readMatrixMarket(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw FormatError("matrix market: empty input");
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw FormatError("matrix market: missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix") throw FormatError("matrix market: unsupported object '" + object + "'");
    if (format != "coordinate") throw FormatError("matrix market: only coordinate format is supported, got '" + format + "'");
    const bool is_complex = field == "complex";
    if (!is_complex && field != "real" && field != "integer" && field != "double")
        throw FormatError("matrix market: unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric")
        throw FormatError("matrix market: unsupported symmetry '" + symmetry + "'");

    do {
        if (!std::getline(in, line)) throw FormatError("matrix market: missing size line");
    } while (line.empty() || line[0] == '%');
    long long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0)
            throw FormatError("matrix market: malformed size line '" + line + "'");
    }

    std::vector<Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(symmetry == "general" ? nnz : 2 * nnz));
    long long read = 0;
    while (read < nnz && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        long long i = 0, j = 0;
        double re = 0.0, im = 0.0;
        if (!(es >> i >> j >> re)) throw FormatError("matrix market: malformed entry line '" + line + "'");
        if (is_complex && !(es >> im)) throw FormatError("matrix market: complex entry missing imaginary part");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw FormatError("matrix market: index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        const cplx v(re, im);
        entries.push_back({i - 1, j - 1, v});
        if (i != j) {
            if (symmetry == "symmetric") entries.push_back({j - 1, i - 1, v});
            else if (symmetry == "hermitian") entries.push_back({j - 1, i - 1, std::conj(v)});
            else if (symmetry == "skew-symmetric") entries.push_back({j - 1, i - 1, -v});
        }
        read++;
    }
    if (read < nnz) throw FormatError("matrix market: expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));

    if (is_complex) return CsrMatrix<cplx>::fromTriplets(rows, cols, std::move(entries));
    std::vector<Triplet<double>> real;
    real.reserve(entries.size());
    for (const auto& e : entries) real.push_back({e.row, e.col, e.value.real()});
    return CsrMatrix<double>::fromTriplets(rows, cols, std::move(real));
}

AnyCsr readMatrixMarket(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("matrix market: cannot open '" + path + "'");
    return readMatrixMarket(in);
}

template <>
CsrMatrix<double> readMatrixMarketAs<double>(const std::string& path)
{
    auto any = readMatrixMarket(path);
    if (auto* r = std::get_if<CsrMatrix<double>>(&any)) return std::move(*r);
    throw FormatError("matrix market: '" + path + "' is complex, a real matrix was requested");
}

template <>
CsrMatrix<cplx> readMatrixMarketAs<cplx>(const std::string& path)
{
    auto any = readMatrixMarket(path);
    if (auto* r = std::get_if<CsrMatrix<double>>(&any)) return toComplex(*r);
    return std::get<CsrMatrix<cplx>>(std::move(any));
}

template <typename T>
void writeMatrixMarket(const CsrMatrix<T>& A, std::ostream& out)
{
    out << "%%MatrixMarket matrix coordinate " << (is_complex_v<T> ? "complex" : "real") << " general\n";
    out << A.rows() << " " << A.cols() << " " << A.nnz() << "\n";
    char buf[96];
    for (Index i = 0; i < A.rows(); i++) {
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) {
            const T v = A.values()[p];
            if constexpr (is_complex_v<T>) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
            }
            out << (i + 1) << " " << (A.colIndices()[p] + 1) << " " << buf << "\n";
        }
    }
}

template <typename T>
void writeMatrixMarket(const CsrMatrix<T>& A, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw FormatError("matrix market: cannot write '" + path + "'");
    writeMatrixMarket(A, out);
    if (!out) throw FormatError("matrix market: write to '" + path + "' failed");
}

template void writeMatrixMarket(const CsrMatrix<double>&, std::ostream&);
template void writeMatrixMarket(const CsrMatrix<cplx>&, std::ostream&);
template void writeMatrixMarket(const CsrMatrix<double>&, const std::string&);
template void writeMatrixMarket(const CsrMatrix<cplx>&, const std::string&);

}  // namespace mfu

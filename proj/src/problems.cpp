#include "mfu/problems.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "mfu/mmio.h"

namespace mfu {

std::uint64_t SeededRandom::next()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SeededRandom::uniform()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRandom::below(std::uint64_t n)
{
    if (n == 0) throw DomainError("SeededRandom::below: empty range");
    // rejection keeps the draw unbiased
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

SeededRandom seededRandom(std::uint64_t seed)
{
    return SeededRandom(seed);
}

CsrMatrix<double> genExpDecay(Index n, double alpha, double beta, Index keep_offdiagonals)
{
    if (n < 1) throw DomainError("genExpDecay: n must be positive");
    if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("genExpDecay: alpha and beta must be positive");
    if (keep_offdiagonals < 0) throw DomainError("genExpDecay: keep_offdiagonals must be >= 0");
    std::vector<Triplet<double>> t;
    for (Index i = 0; i < n; i++) {
        const Index j0 = std::max<Index>(0, i - keep_offdiagonals);
        const Index j1 = std::min<Index>(n - 1, i + keep_offdiagonals);
        for (Index j = j0; j <= j1; j++) {
            const double v = i >= j ? std::exp(-alpha * static_cast<double>(i - j))
                                    : std::exp(-beta * static_cast<double>(j - i));
            t.push_back({i, j, v});
        }
    }
    return CsrMatrix<double>::fromTriplets(n, n, std::move(t));
}

CsrMatrix<double> genPolyDecay(Index n)
{
    if (n < 1) throw DomainError("genPolyDecay: n must be positive");
    std::vector<Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n) * n);
    for (Index i = 0; i < n; i++)
        for (Index j = 0; j < n; j++) {
            const double d = static_cast<double>(i - j);
            t.push_back({i, j, 1.0 / (2.0 + d * d)});
        }
    return CsrMatrix<double>::fromTriplets(n, n, std::move(t));
}

CsrMatrix<double> genReactionDiffusion3D(Index m, double k, double fill_fraction, std::uint64_t rng_seed)
{
    if (m < 2) throw DomainError("genReactionDiffusion3D: need at least 2 points per dimension");
    if (m > 128 || m * m * m > kMaxGridPoints)
        throw DomainError("genReactionDiffusion3D: grid of " + std::to_string(m) + "^3 points exceeds the maximum");
    if (fill_fraction < 0.0 || fill_fraction > 1.0) throw DomainError("genReactionDiffusion3D: bad fill fraction");
    const Index N = m * m * m;
    const double h = 1.0 / static_cast<double>(m + 1);
    const double off = k / (h * h);
    auto id = [m](Index i, Index j, Index l) { return i + m * (j + m * l); };
    std::vector<Triplet<double>> t;
    for (Index l = 0; l < m; l++)
        for (Index j = 0; j < m; j++)
            for (Index i = 0; i < m; i++) {
                const Index r = id(i, j, l);
                t.push_back({r, r, -6.0 * off});
                if (i > 0) t.push_back({r, id(i - 1, j, l), off});
                if (i + 1 < m) t.push_back({r, id(i + 1, j, l), off});
                if (j > 0) t.push_back({r, id(i, j - 1, l), off});
                if (j + 1 < m) t.push_back({r, id(i, j + 1, l), off});
                if (l > 0) t.push_back({r, id(i, j, l - 1), off});
                if (l + 1 < m) t.push_back({r, id(i, j, l + 1), off});
            }

    const std::uint64_t total = static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
    const auto count = static_cast<std::uint64_t>(std::ceil(fill_fraction * static_cast<double>(total)));
    SeededRandom rng(rng_seed);
    std::unordered_set<std::uint64_t> taken;
    while (taken.size() < count) {
        const std::uint64_t pos = rng.below(total);
        if (!taken.insert(pos).second) continue;
        const double val = rng.uniform();
        t.push_back({static_cast<Index>(pos / N), static_cast<Index>(pos % N), val});
    }
    return CsrMatrix<double>::fromTriplets(N, N, std::move(t));
}

AdvectionDiffusionCoefficients AdvectionDiffusionCoefficients::standard()
{
    using std::numbers::pi;
    AdvectionDiffusionCoefficients c;
    c.k1 = 1e-2;
    c.k2 = [](double y) { return 2.0 + 1e-5 * std::cos(5.0 * pi * y); };
    c.t1 = [](double x) { return 1.0 + 0.15 * std::sin(10.0 * pi * x); };
    c.t2 = [](double y) { return 1.0 + 0.45 * std::sin(20.0 * pi * y); };
    return c;
}

AdvectionDiffusionCoefficients AdvectionDiffusionCoefficients::constant(double k1, double k2, double t1, double t2)
{
    AdvectionDiffusionCoefficients c;
    c.k1 = k1;
    c.k2 = [k2](double) { return k2; };
    c.t1 = [t1](double) { return t1; };
    c.t2 = [t2](double) { return t2; };
    return c;
}

CsrMatrix<double> genAdvectionDiffusion2D(Index m, const AdvectionDiffusionCoefficients& coef, bool grid_units)
{
    if (m < 2) throw DomainError("genAdvectionDiffusion2D: need at least 2 points per dimension");
    if (m * m > kMaxGridPoints) throw DomainError("genAdvectionDiffusion2D: grid too large");
    const double h = 1.0 / static_cast<double>(m + 1);
    const double h2 = h * h;
    const double unit = grid_units ? h2 : 1.0;
    auto id = [m](Index i, Index j) { return i + m * j; };
    std::vector<Triplet<double>> t;
    for (Index j = 0; j < m; j++) {
        const double y = static_cast<double>(j + 1) * h;
        const double ks = coef.k2(y - 0.5 * h), kn = coef.k2(y + 0.5 * h);
        const double ty = coef.t2(y);
        for (Index i = 0; i < m; i++) {
            const double x = static_cast<double>(i + 1) * h;
            const double tx = coef.t1(x);
            const Index r = id(i, j);
            double diag = -(2.0 * coef.k1 + ks + kn) / h2;
            double west = coef.k1 / h2, east = coef.k1 / h2;
            double south = ks / h2, north = kn / h2;
            // t u_x: upwind side is where the characteristics come from
            if (tx > 0.0) {
                east += tx / h;
                diag -= tx / h;
            } else {
                west -= tx / h;
                diag += tx / h;
            }
            if (ty > 0.0) {
                north += ty / h;
                diag -= ty / h;
            } else {
                south -= ty / h;
                diag += ty / h;
            }
            t.push_back({r, r, unit * diag});
            if (i > 0) t.push_back({r, id(i - 1, j), unit * west});
            if (i + 1 < m) t.push_back({r, id(i + 1, j), unit * east});
            if (j > 0) t.push_back({r, id(i, j - 1), unit * south});
            if (j + 1 < m) t.push_back({r, id(i, j + 1), unit * north});
        }
    }
    return CsrMatrix<double>::fromTriplets(m * m, m * m, std::move(t));
}

std::string toString(ProblemFamily f)
{
    switch (f) {
        case ProblemFamily::exp_decay: return "exp_decay";
        case ProblemFamily::poly_decay: return "poly_decay";
        case ProblemFamily::reaction_diffusion_3d: return "reaction_diffusion_3d";
        case ProblemFamily::advection_diffusion_2d: return "advection_diffusion_2d";
        case ProblemFamily::matrix_market: return "matrix_market";
    }
    return "?";
}

ProblemFamily parseProblemFamily(const std::string& s)
{
    if (s == "exp_decay") return ProblemFamily::exp_decay;
    if (s == "poly_decay") return ProblemFamily::poly_decay;
    if (s == "reaction_diffusion_3d") return ProblemFamily::reaction_diffusion_3d;
    if (s == "advection_diffusion_2d") return ProblemFamily::advection_diffusion_2d;
    if (s == "matrix_market" || s == "mtx") return ProblemFamily::matrix_market;
    throw DomainError("unknown problem family '" + s + "'");
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double toDouble(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size()) throw FormatError("problem spec: bad number for " + key + ": '" + v + "'");
    return x;
}

std::uint64_t toUnsigned(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    std::uint64_t x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty() || v[0] == '-')
        throw FormatError("problem spec: bad integer for " + key + ": '" + v + "'");
    return x;
}

}  // namespace

ProblemSpec ProblemSpec::parse(std::istream& in)
{
    ProblemSpec s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("problem spec line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "family")
            s.family = parseProblemFamily(val);
        else if (key == "n")
            s.n = static_cast<Index>(toUnsigned(key, val));
        else if (key == "alpha")
            s.alpha = toDouble(key, val);
        else if (key == "beta")
            s.beta = toDouble(key, val);
        else if (key == "keep")
            s.keep = static_cast<Index>(toUnsigned(key, val));
        else if (key == "k")
            s.k = toDouble(key, val);
        else if (key == "fill_fraction")
            s.fill_fraction = toDouble(key, val);
        else if (key == "seed" || key == "rng_seed")
            s.rng_seed = toUnsigned(key, val);
        else if (key == "grid_units")
            s.grid_units = toUnsigned(key, val) != 0;
        else if (key == "path")
            s.path = val;
        else
            throw FormatError("problem spec line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return s;
}

ProblemSpec ProblemSpec::parse(const std::string& text)
{
    std::istringstream in(text);
    return parse(in);
}

std::string ProblemSpec::toText() const
{
    std::ostringstream os;
    os.precision(17);
    os << "family=" << toString(family) << "\n"
       << "n=" << n << "\n"
       << "alpha=" << alpha << "\n"
       << "beta=" << beta << "\n"
       << "keep=" << keep << "\n"
       << "k=" << k << "\n"
       << "fill_fraction=" << fill_fraction << "\n"
       << "seed=" << rng_seed << "\n"
       << "grid_units=" << (grid_units ? 1 : 0) << "\n";
    if (!path.empty()) os << "path=" << path << "\n";
    return os.str();
}

CsrMatrix<double> generate(const ProblemSpec& s)
{
    switch (s.family) {
        case ProblemFamily::exp_decay: return genExpDecay(s.n, s.alpha, s.beta, s.keep);
        case ProblemFamily::poly_decay: return genPolyDecay(s.n);
        case ProblemFamily::reaction_diffusion_3d: return genReactionDiffusion3D(s.n, s.k, s.fill_fraction, s.rng_seed);
        case ProblemFamily::advection_diffusion_2d:
            return genAdvectionDiffusion2D(s.n, AdvectionDiffusionCoefficients::standard(), s.grid_units);
        case ProblemFamily::matrix_market:
            if (s.path.empty()) throw FormatError("problem spec: matrix_market needs path=");
            return readMatrixMarketAs<double>(s.path);
    }
    throw DomainError("generate: unknown family");
}

}  // namespace mfu

#include "mfu/rational.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mfu/elliptic.h"

namespace mfu {

/*------------------------------------------------------------------------------
 *         FunctionSpec
 *----------------------------------------------------------------------------*/
FunctionSpec FunctionSpec::exp()
{
    FunctionSpec f;
    f.kind = Kind::exp;
    return f;
}

FunctionSpec FunctionSpec::log()
{
    FunctionSpec f;
    f.kind = Kind::log;
    return f;
}

FunctionSpec FunctionSpec::power(double alpha)
{
    FunctionSpec f;
    f.kind = Kind::power;
    f.alpha = alpha;
    return f;
}

FunctionSpec FunctionSpec::user(std::function<cplx(cplx)> fn, std::string label)
{
    FunctionSpec f;
    f.kind = Kind::user;
    f.fn = std::move(fn);
    f.label = std::move(label);
    return f;
}

FunctionSpec FunctionSpec::parse(const std::string& s)
{
    if (s == "exp") return exp();
    if (s == "log") return log();
    if (s == "sqrt") return power(0.5);
    if (s.rfind("power:", 0) == 0) {
        char* end = nullptr;
        const double a = std::strtod(s.c_str() + 6, &end);
        if (end == s.c_str() + 6 || *end != '\0') throw DomainError("bad exponent in '" + s + "'");
        return power(a);
    }
    throw DomainError("unknown function '" + s + "' (expected exp, log, sqrt or power:<alpha>)");
}

cplx FunctionSpec::operator()(cplx z) const
{
    switch (kind) {
        case Kind::exp: return std::exp(z);
        case Kind::log: return std::log(z);
        case Kind::power: return std::exp(alpha * std::log(z));
        case Kind::user:
            if (!fn) throw DomainError("user function not set");
            return fn(z);
    }
    return {};
}

std::string FunctionSpec::name() const
{
    switch (kind) {
        case Kind::exp: return "exp";
        case Kind::log: return "log";
        case Kind::power: {
            if (alpha == 0.5) return "sqrt";
            std::ostringstream os;
            os << "power:" << alpha;
            return os.str();
        }
        case Kind::user: return label;
    }
    return "?";
}

std::string toString(PfeKind k)
{
    switch (k) {
        case PfeKind::chebyshev_exp: return "chebyshev_exp";
        case PfeKind::pade_log: return "pade_log";
        case PfeKind::contour: return "contour";
    }
    return "?";
}

std::string toString(Multiplier m)
{
    switch (m) {
        case Multiplier::none: return "none";
        case Multiplier::left_A: return "left_A";
        case Multiplier::left_A_imag: return "left_A_imag";
    }
    return "?";
}

/*------------------------------------------------------------------------------
 *         Chebyshev rational approximation of exp
 *----------------------------------------------------------------------------*/
namespace {

struct ChebPair {
    const char* pole_re;
    const char* pole_im;
    const char* res_re;
    const char* res_im;
};

struct ChebRecord {
    int N;
    const char* c0;
    double sup;
    std::vector<ChebPair> pairs;
};

const std::vector<ChebRecord>& chebTable()
{
    static const std::vector<ChebRecord> table = {
#include "chebyshev_table.inc"
    };
    return table;
}

const ChebRecord& chebRecord(Index N)
{
    for (const auto& r : chebTable())
        if (r.N == N) return r;
    std::ostringstream os;
    os << "chebyshevExp: unsupported degree " << N << " (supported:";
    for (const auto& r : chebTable()) os << " " << r.N;
    os << ")";
    throw DomainError(os.str());
}

long double parseLd(const char* s) { return std::strtold(s, nullptr); }

}  // namespace

std::vector<Index> chebyshevSupportedDegrees()
{
    std::vector<Index> out;
    for (const auto& r : chebTable()) out.push_back(r.N);
    return out;
}

double chebyshevTabulatedError(Index N) { return chebRecord(N).sup; }

PartialFractionExpansion chebyshevExp(Index N)
{
    const ChebRecord& rec = chebRecord(N);
    PartialFractionExpansion p;
    p.kind = PfeKind::chebyshev_exp;
    p.N = N;
    p.multiplier = Multiplier::none;
    p.c0_ext = cplxl(parseLd(rec.c0), 0.0L);
    p.c0 = cplx(static_cast<double>(p.c0_ext.real()), 0.0);
    // r(z) = c0 + sum a/(z-p): each term is -a/(p-z), so c = -a and xi = p.
    for (const auto& pr : rec.pairs) {
        const cplxl pole(parseLd(pr.pole_re), parseLd(pr.pole_im));
        const cplxl res(parseLd(pr.res_re), parseLd(pr.res_im));
        for (const auto& [xi, c] : {std::pair{pole, -res}, std::pair{std::conj(pole), -std::conj(res)}}) {
            p.poles_ext.push_back(xi);
            p.coeffs_ext.push_back(c);
            p.poles.emplace_back(static_cast<double>(xi.real()), static_cast<double>(xi.imag()));
            p.coeffs.emplace_back(static_cast<double>(c.real()), static_cast<double>(c.imag()));
        }
    }
    return p;
}

/*------------------------------------------------------------------------------
 *         Pade approximant of log(1+x)
 *----------------------------------------------------------------------------*/
void gaussLegendre01(Index N, std::vector<double>& x, std::vector<double>& w)
{
    if (N < 1) throw DomainError("gaussLegendre: N must be positive");
    x.assign(N, 0.0);
    w.assign(N, 0.0);
    const long double pi = std::numbers::pi_v<long double>;
    for (Index i = 0; i < N; i++) {
        long double z = std::cos(pi * (i + 0.75L) / (N + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; it++) {
            long double p0 = 1.0L, p1 = z;
            for (Index k = 2; k <= N; k++) {
                const long double pk = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (N == 1) {
                p1 = z;
                p0 = 1.0L;
            }
            dp = N * (z * p1 - p0) / (z * z - 1.0L);
            const long double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-19L) break;
        }
        // Recompute the derivative at the converged root.
        long double p0 = 1.0L, p1 = z;
        for (Index k = 2; k <= N; k++) {
            const long double pk = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0L);
        const long double wt = 2.0L / ((1.0L - z * z) * dp * dp);
        // Map [-1,1] -> [0,1]; nodes come out descending, so store reversed.
        x[N - 1 - i] = static_cast<double>((1.0L + z) / 2.0L);
        w[N - 1 - i] = static_cast<double>(wt / 2.0L);
    }
}

PartialFractionExpansion padeLog(Index N)
{
    if (N < 1) throw DomainError("padeLog: N must be positive");
    PartialFractionExpansion p;
    p.kind = PfeKind::pade_log;
    p.N = N;
    p.multiplier = Multiplier::left_A;
    gaussLegendre01(N, p.beta, p.alpha);
    for (Index j = 0; j < N; j++) {
        // alpha (1 + beta x)^{-1} = -(alpha/beta) (xi - x)^{-1}, xi = -1/beta.
        p.poles.emplace_back(-1.0 / p.beta[j], 0.0);
        p.coeffs.emplace_back(-p.alpha[j] / p.beta[j], 0.0);
    }
    return p;
}

/*------------------------------------------------------------------------------
 *         Contour quadrature
 *----------------------------------------------------------------------------*/
PartialFractionExpansion contourPFE(const FunctionSpec& psi, double a, double b, Index N)
{
    if (!(a > 0.0) || !(a < b)) throw DomainError("contourPFE: need 0 < a < b");
    if (N < 1) throw DomainError("contourPFE: N must be positive");
    PartialFractionExpansion p;
    p.kind = PfeKind::contour;
    p.N = N;
    p.multiplier = Multiplier::left_A_imag;
    p.a = a;
    p.b = b;

    const double r = std::sqrt(b / a);
    const double k = (r - 1.0) / (r + 1.0);
    const EllipticK KK = ellipticK(k);
    const double sab = std::sqrt(a * b);
    for (Index j = 0; j < N; j++) {
        const cplx t(-KK.K + (j + 0.5) * 2.0 * KK.K / N, 0.5 * KK.Kprime);
        const EllipticValues ev = jacobiElliptic(t, k);
        const cplx den = 1.0 / k - ev.sn;
        const cplx z = sab * (1.0 / k + ev.sn) / den;
        const cplx dzdt = ev.cn * ev.dn / (den * den);
        p.poles.push_back(z);
        p.coeffs.push_back(psi(z) / z * dzdt);
    }
    p.gamma = -4.0 * KK.K * sab / (k * std::numbers::pi * N);
    return p;
}

/*------------------------------------------------------------------------------
 *         Scalar evaluation
 *----------------------------------------------------------------------------*/
cplx evalScalar(const PartialFractionExpansion& pfe, cplx x)
{
    for (const auto& xi : pfe.poles)
        if (std::abs(xi - x) <= 1e-14 * std::max(1.0, std::abs(xi)))
            throw DomainError("evalScalar: evaluation point coincides with a pole");

    switch (pfe.multiplier) {
        case Multiplier::none: {
            if (!pfe.poles_ext.empty()) {
                const cplxl xl(x.real(), x.imag());
                cplxl s = pfe.c0_ext;
                for (std::size_t j = 0; j < pfe.poles_ext.size(); j++) s += pfe.coeffs_ext[j] / (pfe.poles_ext[j] - xl);
                return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
            }
            cplx s = pfe.c0;
            for (std::size_t j = 0; j < pfe.poles.size(); j++) s += pfe.coeffs[j] / (pfe.poles[j] - x);
            return s;
        }
        case Multiplier::left_A: {
            cplx s{};
            if (!pfe.alpha.empty()) {
                for (std::size_t j = 0; j < pfe.alpha.size(); j++) s += pfe.alpha[j] / (1.0 + pfe.beta[j] * x);
            } else {
                for (std::size_t j = 0; j < pfe.poles.size(); j++) s += pfe.coeffs[j] / (pfe.poles[j] - x);
            }
            return x * s;
        }
        case Multiplier::left_A_imag: {
            cplx s{};
            for (std::size_t j = 0; j < pfe.poles.size(); j++) s += pfe.coeffs[j] / (pfe.poles[j] - x);
            return pfe.gamma * x * s.imag();
        }
    }
    return {};
}

/*------------------------------------------------------------------------------
 *         JSON records
 *----------------------------------------------------------------------------*/
namespace {

nlohmann::json pairs(const std::vector<cplx>& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

std::vector<cplx> unpairs(const nlohmann::json& a)
{
    std::vector<cplx> v;
    for (const auto& z : a) v.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    return v;
}

}  // namespace

std::string pfeToJson(const PartialFractionExpansion& pfe)
{
    nlohmann::json j;
    j["kind"] = toString(pfe.kind);
    j["N"] = pfe.N;
    j["gamma"] = pfe.gamma;
    j["c0"] = {pfe.c0.real(), pfe.c0.imag()};
    j["multiplier"] = toString(pfe.multiplier);
    j["poles"] = pairs(pfe.poles);
    j["coeffs"] = pairs(pfe.coeffs);
    if (pfe.kind == PfeKind::contour) j["interval"] = {pfe.a, pfe.b};
    if (!pfe.alpha.empty()) {
        j["alpha"] = pfe.alpha;
        j["beta"] = pfe.beta;
    }
    return j.dump();
}

PartialFractionExpansion pfeFromJson(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pfe record: ") + e.what());
    }
    PartialFractionExpansion p;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "chebyshev_exp") p.kind = PfeKind::chebyshev_exp;
        else if (kind == "pade_log") p.kind = PfeKind::pade_log;
        else if (kind == "contour") p.kind = PfeKind::contour;
        else throw FormatError("pfe record: unknown kind '" + kind + "'");
        const std::string mult = j.at("multiplier").get<std::string>();
        if (mult == "none") p.multiplier = Multiplier::none;
        else if (mult == "left_A") p.multiplier = Multiplier::left_A;
        else if (mult == "left_A_imag") p.multiplier = Multiplier::left_A_imag;
        else throw FormatError("pfe record: unknown multiplier '" + mult + "'");
        p.N = j.at("N").get<Index>();
        p.gamma = j.at("gamma").get<double>();
        p.c0 = cplx(j.at("c0").at(0).get<double>(), j.at("c0").at(1).get<double>());
        p.poles = unpairs(j.at("poles"));
        p.coeffs = unpairs(j.at("coeffs"));
        if (j.contains("interval")) {
            p.a = j["interval"].at(0).get<double>();
            p.b = j["interval"].at(1).get<double>();
        }
        if (j.contains("alpha")) {
            p.alpha = j["alpha"].get<std::vector<double>>();
            p.beta = j["beta"].get<std::vector<double>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pfe record: ") + e.what());
    }
    if (p.poles.size() != p.coeffs.size()) throw FormatError("pfe record: poles/coeffs length mismatch");
    // A tabulated Chebyshev set gets its extended shadow back.
    if (p.kind == PfeKind::chebyshev_exp) {
        try {
            const PartialFractionExpansion ref = chebyshevExp(p.N);
            if (ref.poles == p.poles && ref.coeffs == p.coeffs && ref.c0 == p.c0) {
                p.c0_ext = ref.c0_ext;
                p.poles_ext = ref.poles_ext;
                p.coeffs_ext = ref.coeffs_ext;
            }
        } catch (const DomainError&) {
        }
    }
    return p;
}

}  // namespace mfu

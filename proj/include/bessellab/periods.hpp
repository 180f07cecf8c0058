#ifndef BESSELLAB_PERIODS_HPP
#define BESSELLAB_PERIODS_HPP

// Simplex period representations of the Bessel moments.  Write u, v, w for
// the elementary symmetric functions e_1, e_{m-1}, e_m of the integration
// variables.  Over the open m-simplex {a_i > 0, sum a_i < 1} with m = n-1,
//
//   2^{n-1} int_0^inf u K_0(u)^n du       = int da 1 / (w + (1-u) v)
//   2^{n-3} int_0^inf u^3 K_0(u)^n du     = int da w (1-u) / (w + (1-u) v)^2
//   2^{n-1} int_0^inf u I_0(u) K_0(u)^n du = int da 1 / (w u + (1-u) v)
//
// and one dimension down, over the (n-2)-simplex with X = u,
//
//   2^{n-1} int u K_0^n du   = int dx  L(X) 4 / (4 X w + (1-X^2) v)
//   2^{n-3} int u^3 K_0^n du = int dx  ((1+X^2)/(2X) L(X) - 1)
//                                      4 w (1-X^2) / (4 X w + (1-X^2) v)^2
//
// with L(X) = log((1+X)/(1-X)).  The first family has rational integrands
// over a rational domain, which is what exhibits the odd moments as periods;
// the log-kernel family trades one dimension for a logarithm.
//
// evaluate_period integrates either family: certified tensor tanh-sinh
// quadrature through dimension three, randomized Halton sampling above.
// Radii propagate through the nesting, so the deterministic result is a
// genuine enclosure; the sampled one is labelled non-certified and carries
// an empirical error bar instead.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bessellab/bigreal.hpp"
#include "bessellab/exceptions.hpp"
#include "bessellab/precision.hpp"
#include "bessellab/quadrature.hpp"
#include "bessellab/rational.hpp"

namespace bessellab {

// ---------------------------------------------------------------------------
// Elementary symmetric data of a coordinate vector.  Only the outermost three
// functions e_1, e_{m-1}, e_m enter the integrands; for a single variable
// e_0 = 1 by the empty-product convention.

struct SymTriple {
    BigReal u;  // e_1, the coordinate sum
    BigReal v;  // e_{m-1}, the sum of all-but-one products
    BigReal w;  // e_m, the full product
};

struct RationalSymTriple {
    BigRational u;
    BigRational v;
    BigRational w;
};

inline SymTriple sym_triple(const std::vector<BigReal>& a) {
    if (a.empty()) throw DomainError("sym_triple: empty coordinate list");
    long wp = 64;
    for (const BigReal& ai : a) wp = std::max(wp, ai.prec());
    SymTriple t{BigReal(wp), BigReal(wp), BigReal(wp)};
    // The small sizes carry the tensor quadrature's inner loops; spell them
    // out to keep the temporary count down.
    if (a.size() == 1) {
        t.u = a[0];
        t.v = BigReal(1L, wp);
        t.w = a[0];
        return t;
    }
    if (a.size() == 2) {
        t.u = a[0] + a[1];
        t.v = t.u;
        t.w = a[0] * a[1];
        return t;
    }
    if (a.size() == 3) {
        BigReal bc = a[1] * a[2];
        t.u = a[0] + a[1] + a[2];
        t.v = a[0] * (a[1] + a[2]) + bc;
        t.w = a[0] * bc;
        return t;
    }
    t.w = BigReal(1L, wp);
    for (const BigReal& ai : a) {
        t.u += ai;
        t.w *= ai;
    }
    // v through prefix and suffix products; no division, so zero or
    // zero-straddling coordinates stay harmless here.
    std::vector<BigReal> suf(a.size() + 1, BigReal(1L, wp));
    for (size_t i = a.size(); i-- > 0;) suf[i] = a[i] * suf[i + 1];
    BigReal pre(1L, wp);
    for (size_t j = 0; j < a.size(); ++j) {
        t.v += pre * suf[j + 1];
        pre *= a[j];
    }
    return t;
}

inline RationalSymTriple sym_triple(const std::vector<BigRational>& a) {
    if (a.empty()) throw DomainError("sym_triple: empty coordinate list");
    RationalSymTriple t{BigRational(0), BigRational(0), BigRational(1)};
    for (const BigRational& ai : a) {
        t.u += ai;
        t.w *= ai;
    }
    std::vector<BigRational> suf(a.size() + 1, BigRational(1));
    for (size_t i = a.size(); i-- > 0;) suf[i] = BigRational(a[i] * suf[i + 1]);
    BigRational pre(1);
    for (size_t j = 0; j < a.size(); ++j) {
        t.v += BigRational(pre * suf[j + 1]);
        pre = BigRational(pre * a[j]);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Which representation of which moment.

enum class PeriodForm { raw_simplex, log_kernel, mixed_I0 };

inline const char* form_name(PeriodForm f) {
    switch (f) {
        case PeriodForm::raw_simplex: return "raw-simplex";
        case PeriodForm::log_kernel: return "log-kernel";
        case PeriodForm::mixed_I0: return "mixed-i0";
    }
    return "?";
}

struct PeriodSpec {
    long n = 3;                                  // K0 power of the represented moment
    long p = 1;                                  // moment power, 1 or 3
    PeriodForm form = PeriodForm::raw_simplex;

    // Number of integration variables.
    long dimension() const { return form == PeriodForm::log_kernel ? n - 2 : n - 1; }

    void validate() const {
        if (n < 3) throw DomainError("PeriodSpec: representations start at n = 3");
        if (p != 1 && p != 3) throw DomainError("PeriodSpec: moment power must be 1 or 3");
        if (form == PeriodForm::mixed_I0 && p != 1)
            throw DomainError("PeriodSpec: the mixed representation only covers p = 1");
    }

    std::string to_string() const {
        return std::string(form_name(form)) + " n=" + std::to_string(n) +
               " p=" + std::to_string(p);
    }
};

namespace detail {

// Copy to another working precision, keeping the radius (plus the rounding
// step when narrowing).
inline BigReal at_prec(const BigReal& x, long wq) {
    BigReal out(wq);
    mpfr_set(out.raw(), x.raw(), MPFR_RNDN);
    out.add_radius(x.raw_radius());
    if (wq < x.prec() && !out.is_zero()) out.add_radius_2exp(exp_of(out) - wq);
    return out;
}

// log((1+x)/(1-x)) as log(1 + 2x/(1-x)).  The series branch keeps full
// relative accuracy once 2x/(1-x) is too small for 1 + t to hold it; the
// truncation after t^3/3 is bounded by |t|^4.
inline BigReal log_ratio(const BigReal& x, const BigReal& omx, long wp) {
    BigReal t = mul_2exp(x, 1) / omx;
    if (below_2exp(t, -(wp / 3))) {
        BigReal t2 = t * t;
        BigReal v = t - mul_2exp(t2, -1) + t2 * t / BigReal(3L, wp);
        v.add_radius((t2 * t2).upper_abs().raw());
        return v;
    }
    return log(BigReal(1L, wp) + t);
}

// (1+x^2)/(2x) log((1+x)/(1-x)) - 1, the deficit multiplying the p = 3 log
// kernels.  It cancels to (4/3) x^2 + (8/15) x^4 + ... near 0, so the direct
// branch runs at half again the working precision to keep the cancellation
// out of the certified radius; tiny arguments switch to the series, whose
// tail is below x^6.
inline BigReal log_ratio_deficit(const BigReal& x, const BigReal& omx, long wp) {
    if (below_2exp(x, -(wp / 6))) {
        BigReal x2 = x * x;
        BigReal v = x2 * (BigReal(4L, wp) / BigReal(3L, wp) +
                          x2 * (BigReal(8L, wp) / BigReal(15L, wp)));
        v.add_radius((x2 * x2 * x2).upper_abs().raw());
        return v;
    }
    long wq = wp + wp / 2 + 16;
    BigReal xl = at_prec(x, wq);
    BigReal L = log_ratio(xl, at_prec(omx, wq), wq);
    BigReal v = (BigReal(1L, wq) + xl * xl) * L / mul_2exp(xl, 1) - BigReal(1L, wq);
    return at_prec(v, wp);
}

// Integrand cores.  tail is 1 - u handed in separately so callers next to the
// sum = 1 face can supply it to full relative accuracy.

inline BigReal raw_core(const PeriodSpec& spec, const SymTriple& s, const BigReal& tail,
                        long wp) {
    if (spec.form == PeriodForm::mixed_I0)
        return BigReal(1L, wp) / (s.w * s.u + tail * s.v);
    BigReal den = s.w + tail * s.v;
    if (spec.p == 1) return BigReal(1L, wp) / den;
    return s.w * tail / (den * den);
}

inline BigReal log_core(long p, const SymTriple& s, const BigReal& tail, long wp) {
    BigReal one_minus_sq = tail * (BigReal(1L, wp) + s.u);  // 1 - X^2
    BigReal den = mul_2exp(s.u * s.w, 2) + one_minus_sq * s.v;
    if (p == 1) return mul_2exp(log_ratio(s.u, tail, wp), 2) / den;
    BigReal B = log_ratio_deficit(s.u, tail, wp);
    return mul_2exp(B * s.w * one_minus_sq, 2) / (den * den);
}

inline void check_interior(const std::vector<BigReal>& a, const BigReal& tail,
                           const char* who) {
    for (const BigReal& ai : a)
        if (ai.sign() <= 0 || ai.lower_abs().sign() <= 0)
            throw DomainError(std::string(who) + ": point on or outside the simplex boundary");
    if (tail.sign() <= 0 || tail.lower_abs().sign() <= 0)
        throw DomainError(std::string(who) + ": point on or outside the simplex boundary");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pointwise integrands.  The rational overload is the period witness: on
// rational points the raw-simplex and mixed integrands take exact rational
// values.  Log-kernel integrands are transcendental and only exist as balls.

inline BigRational simplex_integrand(const PeriodSpec& spec, const std::vector<BigRational>& a) {
    spec.validate();
    if (spec.form == PeriodForm::log_kernel)
        throw DomainError("simplex_integrand: log-kernel integrands are not rational, "
                          "use log_kernel_integrand");
    if (static_cast<long>(a.size()) != spec.dimension())
        throw DomainError("simplex_integrand: expected " + std::to_string(spec.dimension()) +
                          " coordinates for " + spec.to_string());
    BigRational sum(0);
    for (const BigRational& ai : a) {
        if (sgn(ai) <= 0)
            throw DomainError("simplex_integrand: point on or outside the simplex boundary");
        sum += ai;
    }
    if (sum >= 1)
        throw DomainError("simplex_integrand: point on or outside the simplex boundary");
    RationalSymTriple t = sym_triple(a);
    BigRational tail(1 - sum);
    if (spec.form == PeriodForm::mixed_I0)
        return BigRational(1 / BigRational(t.w * t.u + tail * t.v));
    BigRational den(t.w + tail * t.v);
    if (spec.p == 1) return BigRational(1 / den);
    return BigRational(t.w * tail / BigRational(den * den));
}

inline BigReal simplex_integrand(const PeriodSpec& spec, const std::vector<BigReal>& a) {
    spec.validate();
    if (spec.form == PeriodForm::log_kernel)
        throw DomainError("simplex_integrand: log-kernel integrands are not rational, "
                          "use log_kernel_integrand");
    if (static_cast<long>(a.size()) != spec.dimension())
        throw DomainError("simplex_integrand: expected " + std::to_string(spec.dimension()) +
                          " coordinates for " + spec.to_string());
    long wp = 64;
    for (const BigReal& ai : a) wp = std::max(wp, ai.prec());
    BigReal sum(wp);
    for (const BigReal& ai : a) sum += ai;
    BigReal tail = BigReal(1L, wp) - sum;
    detail::check_interior(a, tail, "simplex_integrand");
    return detail::raw_core(spec, sym_triple(a), tail, wp);
}

inline BigReal log_kernel_integrand(const PeriodSpec& spec, const std::vector<BigReal>& x,
                                    const Precision& prec) {
    spec.validate();
    if (spec.form != PeriodForm::log_kernel)
        throw DomainError("log_kernel_integrand: spec is " + spec.to_string() +
                          ", not a log-kernel form");
    if (static_cast<long>(x.size()) != spec.dimension())
        throw DomainError("log_kernel_integrand: expected " + std::to_string(spec.dimension()) +
                          " coordinates for " + spec.to_string());
    long wp = prec.bits() + 16;
    for (const BigReal& xi : x) wp = std::max(wp, xi.prec());
    BigReal sum(wp);
    for (const BigReal& xi : x) sum += xi;
    BigReal tail = BigReal(1L, wp) - sum;
    detail::check_interior(x, tail, "log_kernel_integrand");
    return detail::log_core(spec.p, sym_triple(x), tail, wp);
}

// ---------------------------------------------------------------------------
// Deterministic tensor quadrature over the simplex.

namespace detail {

// Map the cube to the simplex by a_k = s_k prod_{j<k}(1-s_j).  The map
// telescopes, 1 - sum_{j<=k} a_j = prod_{j<=k}(1-s_j), so the remainder
// handed to the integrand is an exact product and keeps full relative
// accuracy next to the sum = 1 face, where the log kernels blow up.  Each
// axis contributes its Jacobian factor prod_{j<k}(1-s_j) once.
inline BigReal simplex_tensor(
    long dim,
    const std::function<BigReal(const std::vector<BigReal>&, const BigReal&)>& fn, long wp,
    long tol_exp) {
    std::vector<BigReal> a(static_cast<size_t>(dim), BigReal(wp));
    std::function<BigReal(long, const BigReal&, long)> axis =
        [&](long k, const BigReal& rem, long slack) -> BigReal {
        auto slice = [&](const BigReal& s, const BigReal& oms) -> BigReal {
            a[static_cast<size_t>(k)] = s * rem;
            if (k + 1 == dim) return fn(a, rem * oms);
            // This node enters the sum above with weight ~ s (1-s), so the
            // subtree below may run looser by exactly that factor.  Without
            // the slack the integrand's boundary layers (width ~ the small
            // outer coordinate) push every inner axis several levels deeper
            // and the cost compounds across the tensor.
            long deficit = -(exp_of(s) + exp_of(oms));
            if (deficit < 0) deficit = 0;
            long passed = std::min(slack + deficit, -tol_exp - 20);
            return axis(k + 1, rem * oms, std::max(passed, 0L));
        };
        // Inner axes run tighter by a fixed gap so their inherited radii sit
        // safely below the level-difference threshold of the axis above; that
        // test can never pass once the inherited radius exceeds it.  The level
        // cap scales with the tolerance so a boundary-layer slice stops with
        // an honest wide radius instead of burning the full level budget.
        long tol_k = tol_exp - 8 * k + slack;
        long cap = std::clamp(4 - tol_k / 12, 4L, 10L);
        return tanh_sinh_unit(slice, wp, tol_k, cap) * rem;
    };
    return axis(0, BigReal(1L, wp), 0);
}

inline bool certified_to(const BigReal& v, long digits) {
    if (v.radius_below_pow10(digits)) return true;
    if (v.is_zero()) return false;
    double mag = std::log10(std::abs(v.to_double()));
    return mag > 0 && v.log10_radius() - mag <= -static_cast<double>(digits);
}

}  // namespace detail

struct PeriodResult {
    BigReal value;
    bool certified = false;
    long samples = 0;  // integrand evaluations of the sampling path, 0 for tensor quadrature
};

inline PeriodResult evaluate_period(const PeriodSpec& spec, const Precision& prec) {
    spec.validate();
    long dim = spec.dimension();
    if (dim > 3)
        throw DomainError("evaluate_period: tensor quadrature covers dimension <= 3; " +
                          spec.to_string() + " has dimension " + std::to_string(dim) +
                          ", use the sampling overload");
    BigReal val;
    // Every guard digit multiplies the node count on each axis, so the
    // margin shrinks as the dimension grows.
    long margin = dim >= 3 ? 3 : (dim == 2 ? 6 : 8);
    for (int attempt = 0; attempt < 2; ++attempt) {
        long wp = prec.bits() + 32 + (attempt ? prec.bits() / 2 + 48 : 0);
        long tol_exp = -((prec.target_digits + margin + 5 * attempt) * 3322) / 1000;
        auto fn = [&](const std::vector<BigReal>& a, const BigReal& tail) -> BigReal {
            SymTriple s = sym_triple(a);
            return spec.form == PeriodForm::log_kernel
                       ? detail::log_core(spec.p, s, tail, wp)
                       : detail::raw_core(spec, s, tail, wp);
        };
        val = detail::simplex_tensor(dim, fn, wp, tol_exp);
        if (detail::certified_to(val, prec.target_digits)) return {val, true, 0};
    }
    throw PrecisionError("evaluate_period: " + spec.to_string() + " stalled short of " +
                             std::to_string(prec.target_digits) + " certified digits",
                         val.log10_radius());
}

// ---------------------------------------------------------------------------
// Randomized quasi-Monte Carlo for the higher-dimensional representations.
// Halton points in prime bases, one Cranley-Patterson shift per replicate,
// and a quintic smoothstep on each axis so the weight vanishes at the faces
// where the integrands are singular.  Two independent replicates supply the
// error bar; the result is explicitly non-certified.

namespace detail {

inline double radical_inverse(unsigned long i, unsigned long base) {
    double f = 1.0, r = 0.0;
    while (i != 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

// double-precision copy of the integrand cores for the sampling path
inline double period_integrand_d(const PeriodSpec& spec, const double* a, long dim,
                                 double tail) {
    double u = 0.0, w = 1.0;
    for (long i = 0; i < dim; ++i) {
        u += a[i];
        w *= a[i];
    }
    double v = 0.0;
    for (long j = 0; j < dim; ++j) {
        double prod = 1.0;
        for (long i = 0; i < dim; ++i)
            if (i != j) prod *= a[i];
        v += prod;
    }
    if (spec.form == PeriodForm::mixed_I0) return 1.0 / (w * u + tail * v);
    if (spec.form == PeriodForm::raw_simplex) {
        double den = w + tail * v;
        return spec.p == 1 ? 1.0 / den : w * tail / (den * den);
    }
    double omsq = tail * (1.0 + u);
    double den = 4.0 * u * w + omsq * v;
    if (spec.p == 1) return 4.0 * std::log1p(2.0 * u / tail) / den;
    double deficit;
    if (u < 1e-4) {
        double u2 = u * u;
        deficit = u2 * (4.0 / 3.0 + u2 * (8.0 / 15.0));
    } else {
        deficit = (1.0 + u * u) / (2.0 * u) * std::log1p(2.0 * u / tail) - 1.0;
    }
    return 4.0 * deficit * w * omsq / (den * den);
}

}  // namespace detail

inline PeriodResult evaluate_period(const PeriodSpec& spec, long sample_budget,
                                    unsigned long seed = 20260822ul) {
    spec.validate();
    long dim = spec.dimension();
    if (dim > 8)
        throw DomainError("evaluate_period: sampling supports dimension <= 8, got " +
                          std::to_string(dim));
    if (sample_budget < 2048)
        throw DomainError("evaluate_period: sample budget below 2048 cannot give an error bar");
    static constexpr unsigned long kPrimes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    long per = sample_budget / 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double est[2] = {0.0, 0.0};
    for (int rep = 0; rep < 2; ++rep) {
        double shift[8];
        for (long i = 0; i < dim; ++i) shift[i] = unif(rng);
        long double acc = 0.0L;
        for (long k = 0; k < per; ++k) {
            double a[8], rem = 1.0, weight = 1.0;
            for (long i = 0; i < dim; ++i) {
                double t = detail::radical_inverse(static_cast<unsigned long>(k) + 1,
                                                   kPrimes[i]) +
                           shift[i];
                t -= std::floor(t);
                double s = t * t * t * (10.0 + t * (6.0 * t - 15.0));
                weight *= 30.0 * t * t * (1.0 - t) * (1.0 - t);
                weight *= rem;
                a[i] = s * rem;
                rem *= 1.0 - s;
            }
            // weight = 0 marks a face point, where the integrand limit times
            // the vanishing weight is 0; skip rather than form inf * 0.
            if (weight != 0.0)
                acc += static_cast<long double>(
                    detail::period_integrand_d(spec, a, dim, rem) * weight);
        }
        est[rep] = static_cast<double>(acc / static_cast<long double>(per));
    }
    double mid = 0.5 * (est[0] + est[1]);
    double spread = std::abs(est[0] - est[1]);
    PeriodResult out;
    out.value = BigReal(64L);
    mpfr_set_d(out.value.raw(), mid, MPFR_RNDN);
    BigReal bar(64L);
    mpfr_set_d(bar.raw(), spread + std::abs(mid) * 1e-13, MPFR_RNDU);
    out.value.add_radius(bar.raw());
    out.certified = false;
    out.samples = 2 * per;
    return out;
}

// ---------------------------------------------------------------------------
// One-variable form of the proved weight-4 sum rule 4 int u K_0^4 du
// - 16 int u^3 K_0^4 du = 3: both moments collapse to log kernels on (0,1),
// giving
//
//   int_0^1 [ L(x)^2 - 4 (1-x^2) ((1+x^2)/(2x) L(x) - 1)^2 ] dx / x = 3.
//
// Returns |integral - 3| as a certified ball.

inline BigReal verify_weight4_kernel_identity(const Precision& prec) {
    long wp = prec.bits() + 48;
    long tol_exp = -((prec.target_digits + 10) * 3322) / 1000;
    auto fn = [&](const BigReal& x, const BigReal& omx) -> BigReal {
        BigReal L = detail::log_ratio(x, omx, wp);
        BigReal B = detail::log_ratio_deficit(x, omx, wp);
        BigReal sq = omx * (BigReal(1L, wp) + x) * B * B;
        return (L * L - mul_2exp(sq, 2)) / x;
    };
    BigReal r = detail::tanh_sinh_unit(fn, wp, tol_exp);
    return abs(r - BigReal(3L, wp));
}

}  // namespace bessellab

#endif  // BESSELLAB_PERIODS_HPP

#ifndef BESSELLAB_QUADRATURE_HPP
#define BESSELLAB_QUADRATURE_HPP

// Certified evaluation of Bessel moment integrals
//
//     int_0^inf u^p K0(u)^a K1(u)^b I0(u)^c I1(u)^d du
//
// and of nested variants  int f(u) [int_0^u g(x) dx] du.  The half line is
// split at u = 1: a tanh-sinh rule covers (0,1) and an exp-sinh rule covers
// (1,inf).  Both are trapezoid sums in a doubly exponential variable with
// level doubling; nodes, weights and Bessel values are cached globally so a
// batch of integrands shares one set of function evaluations.
//
// Error accounting: ball arithmetic carries the per-node rounding radii, the
// level-to-level difference bounds the discretization error, and explicit
// allowances cover the truncated tails.  Nested inner integrals accumulate
// through a cumulative map per inner product, extended between sample points
// by Gauss-Legendre panels run at two orders (the order gap supplies the
// error estimate).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "bessellab/bigreal.hpp"
#include "bessellab/exceptions.hpp"
#include "bessellab/precision.hpp"
#include "bessellab/rational.hpp"
#include "bessellab/specfun.hpp"

namespace bessellab {

// One integrand u^p K0^a K1^b I0^c I1^d.  p may be negative; the Bessel
// powers may not.
struct BesselProduct {
    long p = 0;
    long a = 0;
    long b = 0;
    long c = 0;
    long d = 0;

    auto operator<=>(const BesselProduct&) const = default;

    // Near 0 the product behaves like u^zero_exponent() times log powers.
    long zero_exponent() const { return p - b + d; }
    // Near infinity it decays like e^{-decay_order() * u} times powers of u.
    long decay_order() const { return a + b - c - d; }

    unsigned mask() const {
        unsigned m = 0;
        if (c > 0) m |= kNeedI0;
        if (d > 0) m |= kNeedI1;
        if (a > 0) m |= kNeedK0;
        if (b > 0) m |= kNeedK1;
        return m;
    }

    void validate() const {
        if (a < 0 || b < 0 || c < 0 || d < 0)
            throw DomainError("BesselProduct: Bessel powers must be nonnegative");
        if (zero_exponent() <= -1)
            throw DomainError("BesselProduct: divergent at 0, need p - b + d > -1");
        if (decay_order() <= 0)
            throw DomainError("BesselProduct: divergent at infinity, need a + b > c + d");
    }

    std::string to_string() const {
        std::string s = "u^" + std::to_string(p);
        auto app = [&](const char* n, long e) {
            if (e != 0) s += std::string(" ") + n + "^" + std::to_string(e);
        };
        app("K0", a);
        app("K1", b);
        app("I0", c);
        app("I1", d);
        return s;
    }
};

// Preconditions for int f(u) G(u) du with G(u) = int_0^u g: the inner product
// must be integrable on its own, the outer one only after picking up the extra
// u^{e_g+1} vanishing of G at the origin and must decay at infinity since G
// tends to a constant there.
inline void validate_nested_pair(const BesselProduct& f, const BesselProduct& g) {
    if (f.a < 0 || f.b < 0 || f.c < 0 || f.d < 0 || g.a < 0 || g.b < 0 || g.c < 0 || g.d < 0)
        throw DomainError("nested moment: Bessel powers must be nonnegative");
    if (g.zero_exponent() <= -1)
        throw DomainError("nested moment: inner factor divergent at 0");
    if (g.decay_order() <= 0)
        throw DomainError("nested moment: inner factor divergent at infinity");
    if (f.decay_order() <= 0)
        throw DomainError("nested moment: outer factor must decay at infinity");
    if (f.zero_exponent() + g.zero_exponent() + 1 <= -1)
        throw DomainError("nested moment: combined integrand divergent at 0");
}

namespace detail {

// Node grid: abscissas live at t = idx / 2^12, level L uses step 2^{11-L}.
constexpr long kTGridBits = 12;
constexpr long kQuadMaxLevel = 11;
constexpr double kTailTMax = 7.8;

enum class Panel : int { unit = 0, ray = 1 };

struct PanelNode {
    BigReal x;      // abscissa: x in (0,1) for unit, u in (1,inf) for ray
    BigReal omx;    // 1-x for unit, u-1 for ray
    BigReal wbase;  // weight per unit step h
};

struct NodeKey {
    int kind;
    long idx;
    long wp;
    auto operator<=>(const NodeKey&) const = default;
};

struct BesselAtNode {
    unsigned have = 0;
    BesselValues vals;
};

struct GLRule {
    std::vector<BigReal> x;
    std::vector<BigReal> w;
};

struct BigRealCentreLess {
    bool operator()(const BigReal& a, const BigReal& b) const {
        return mpfr_cmp(a.raw(), b.raw()) < 0;
    }
};

using CumulativeMap = std::map<BigReal, BigReal, BigRealCentreLess>;

struct QuadCaches {
    std::mutex node_mu;
    std::map<NodeKey, PanelNode> nodes;
    std::map<NodeKey, BesselAtNode> bessel;
    std::mutex gl_mu;
    std::map<std::pair<long, long>, GLRule> gl;
    std::mutex gmu;
    std::map<std::pair<BesselProduct, long>, CumulativeMap> gmaps;
};

inline QuadCaches& quad_caches() {
    static QuadCaches c;
    return c;
}

inline long exp_of(const BigReal& v) {
    if (v.is_zero()) return -1000000000L;
    return static_cast<long>(mpfr_get_exp(v.raw()));
}

// |v| + radius < 2^e
inline bool below_2exp(const BigReal& v, long e) {
    BigReal u = v.upper_abs();
    if (u.is_zero()) return true;
    return mpfr_cmp_ui_2exp(u.raw(), 1, e) < 0;
}

inline PanelNode make_panel_node(Panel kind, long idx, long wp) {
    long aw = wp + 16;
    BigReal t(idx, aw);
    t = mul_2exp(t, -kTGridBits);
    if (kind == Panel::unit && idx < 0) t = -t;  // build for |t|, mirror after
    BigReal E = exp(t);
    BigReal Einv = BigReal(1L, aw) / E;
    BigReal sh = mul_2exp(E - Einv, -1);
    BigReal ch = mul_2exp(E + Einv, -1);
    BigReal pi = BigReal::pi(aw);
    PanelNode n;
    if (kind == Panel::unit) {
        // x = 1/(1+e^{-2s}), s = (pi/2) sinh t >= 0 here
        BigReal s2 = pi * sh;  // 2s
        BigReal em = exp(-s2);
        BigReal den = BigReal(1L, aw) + em;
        BigReal x = BigReal(1L, aw) / den;
        BigReal omx = em / den;
        n.wbase = pi * ch * x * omx;
        if (idx < 0) std::swap(x, omx);
        n.x = x;
        n.omx = omx;
    } else {
        // u = 1 + e^{pi sinh t}, signed t
        BigReal q = pi * sh;
        BigReal um1 = exp(q);
        n.x = BigReal(1L, aw) + um1;
        n.omx = um1;
        n.wbase = pi * ch * um1;
    }
    return n;
}

inline const PanelNode& panel_node(Panel kind, long idx, long wp) {
    QuadCaches& qc = quad_caches();
    NodeKey key{static_cast<int>(kind), idx, wp};
    std::lock_guard<std::mutex> lock(qc.node_mu);
    auto it = qc.nodes.find(key);
    if (it == qc.nodes.end())
        it = qc.nodes.emplace(key, make_panel_node(kind, idx, wp)).first;
    return it->second;
}

inline const BesselValues& bessel_at_node(Panel kind, long idx, long wp, unsigned want) {
    QuadCaches& qc = quad_caches();
    NodeKey key{static_cast<int>(kind), idx, wp};
    {
        std::lock_guard<std::mutex> lock(qc.node_mu);
        auto it = qc.bessel.find(key);
        if (it != qc.bessel.end() && (it->second.have & want) == want)
            return it->second.vals;
    }
    const PanelNode& node = panel_node(kind, idx, wp);
    std::lock_guard<std::mutex> lock(qc.node_mu);
    BesselAtNode& entry = qc.bessel[key];
    unsigned need = entry.have | want;
    entry.vals = bessel_all(node.x, wp, need);
    entry.have = need;
    return entry.vals;
}

inline BigReal eval_product(const BesselProduct& f, const BigReal& x,
                            const BesselValues& v, long wp) {
    BigReal r(1L, wp);
    if (f.p > 0)
        r = pow_ui(x, static_cast<unsigned long>(f.p));
    else if (f.p < 0)
        r = r / pow_ui(x, static_cast<unsigned long>(-f.p));
    if (f.a > 0) r = r * pow_ui(v.k0, static_cast<unsigned long>(f.a));
    if (f.b > 0) r = r * pow_ui(v.k1, static_cast<unsigned long>(f.b));
    if (f.c > 0) r = r * pow_ui(v.i0, static_cast<unsigned long>(f.c));
    if (f.d > 0) r = r * pow_ui(v.i1, static_cast<unsigned long>(f.d));
    return r;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules, cached by (order, precision).

inline void legendre_pair_raw(long n, mpfr_srcptr x, mpfr_ptr pn, mpfr_ptr pn1,
                              long prec) {
    // pn = P_n(x), pn1 = P_{n-1}(x)
    mpfr_t p0, p1, tmp;
    mpfr_init2(p0, prec);
    mpfr_init2(p1, prec);
    mpfr_init2(tmp, prec);
    mpfr_set_ui(p0, 1, MPFR_RNDN);
    mpfr_set(p1, x, MPFR_RNDN);
    for (long k = 2; k <= n; ++k) {
        mpfr_mul(tmp, x, p1, MPFR_RNDN);
        mpfr_mul_si(tmp, tmp, 2 * k - 1, MPFR_RNDN);
        mpfr_mul_si(p0, p0, k - 1, MPFR_RNDN);
        mpfr_sub(tmp, tmp, p0, MPFR_RNDN);
        mpfr_div_si(tmp, tmp, k, MPFR_RNDN);
        mpfr_set(p0, p1, MPFR_RNDN);
        mpfr_set(p1, tmp, MPFR_RNDN);
    }
    mpfr_set(pn, p1, MPFR_RNDN);
    mpfr_set(pn1, p0, MPFR_RNDN);
    mpfr_clear(p0);
    mpfr_clear(p1);
    mpfr_clear(tmp);
}

inline GLRule make_gauss_legendre(long n, long wp) {
    GLRule rule;
    rule.x.reserve(static_cast<size_t>(n));
    rule.w.reserve(static_cast<size_t>(n));
    long full = wp + 32;
    for (long i = 1; i <= n / 2; ++i) {
        // Newton refinement of the i-th positive root, coarse to fine.
        mpfr_t x, pn, pn1, dp, step;
        mpfr_init2(x, full);
        mpfr_init2(pn, full);
        mpfr_init2(pn1, full);
        mpfr_init2(dp, full);
        mpfr_init2(step, full);
        double seed = std::cos(M_PI * (static_cast<double>(i) - 0.25) /
                               (static_cast<double>(n) + 0.5));
        mpfr_set_d(x, seed, MPFR_RNDN);
        long laststep_exp = 0;
        for (long prec = 64; ; prec = std::min(prec * 2, full)) {
            long iters = (prec == full) ? 3 : 2;
            for (long it = 0; it < iters; ++it) {
                legendre_pair_raw(n, x, pn, pn1, prec);
                // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
                mpfr_mul(dp, x, pn, MPFR_RNDN);
                mpfr_sub(dp, dp, pn1, MPFR_RNDN);
                mpfr_mul_si(dp, dp, n, MPFR_RNDN);
                mpfr_sqr(step, x, MPFR_RNDN);
                mpfr_sub_ui(step, step, 1, MPFR_RNDN);
                mpfr_div(dp, dp, step, MPFR_RNDN);
                mpfr_div(step, pn, dp, MPFR_RNDN);
                mpfr_sub(x, x, step, MPFR_RNDN);
            }
            if (prec == full) {
                laststep_exp = mpfr_zero_p(step) ? -(full + 64)
                                                 : mpfr_get_exp(step);
                break;
            }
        }
        BigReal root(full);
        mpfr_set(root.raw(), x, MPFR_RNDN);
        root.set_radius_2exp(std::max(laststep_exp + 3, -(wp + 24)));
        // Weight 2 / ((1-x^2) P'_n(x)^2) in ball arithmetic.
        BigReal p0(1L, full), p1 = root;
        for (long k = 2; k <= n; ++k) {
            BigReal pk = (root * p1 * BigReal(2 * k - 1, full) - p0 * BigReal(k - 1, full)) /
                         BigReal(k, full);
            p0 = p1;
            p1 = pk;
        }
        BigReal x2 = root * root;
        BigReal deriv = (root * p1 - p0) * BigReal(n, full) / (x2 - BigReal(1L, full));
        BigReal weight = BigReal(2L, full) / ((BigReal(1L, full) - x2) * deriv * deriv);
        rule.x.push_back(root);
        rule.w.push_back(weight);
        rule.x.push_back(-root);
        rule.w.push_back(weight);
        mpfr_clear(x);
        mpfr_clear(pn);
        mpfr_clear(pn1);
        mpfr_clear(dp);
        mpfr_clear(step);
    }
    return rule;
}

inline const GLRule& gauss_legendre(long n, long wp) {
    QuadCaches& qc = quad_caches();
    std::lock_guard<std::mutex> lock(qc.gl_mu);
    auto key = std::make_pair(n, wp);
    auto it = qc.gl.find(key);
    if (it == qc.gl.end())
        it = qc.gl.emplace(key, make_gauss_legendre(n, wp)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// Generic tanh-sinh integral over (0,1); the integrand receives x and 1-x so
// it can resolve both endpoints.  Used for cumulative-map seeds and by the
// period evaluations.

inline BigReal tanh_sinh_unit(
    const std::function<BigReal(const BigReal&, const BigReal&)>& fn, long wp,
    long tol_exp, long max_level = 10) {
    long thresh = tol_exp - 10;
    BigReal S(wp);
    {
        const PanelNode& n0 = panel_node(Panel::unit, 0, wp);
        S = fn(n0.x, n0.omx) * n0.wbase;
    }
    BigReal q(wp), q_prev(wp), diff(wp);
    bool have_prev = false, converged = false;
    long level = 0;
    for (level = 0; level <= max_level; ++level) {
        long step = 1L << (kTGridBits - 1 - level);
        for (int dir = 0; dir < 2; ++dir) {
            long sign = dir == 0 ? 1 : -1;
            int small_run = 0;
            for (long m = 0;; ++m) {
                long mult = (level == 0) ? (m + 1) : (2 * m + 1);
                long idx = sign * step * mult;
                double tabs = std::abs(static_cast<double>(idx)) / 4096.0;
                if (tabs > kTailTMax) break;
                const PanelNode& node = panel_node(Panel::unit, idx, wp);
                BigReal term = fn(node.x, node.omx) * node.wbase;
                S += term;
                if (below_2exp(term, thresh)) {
                    if (++small_run >= 4 && tabs >= 1.5) break;
                } else {
                    small_run = 0;
                }
            }
        }
        q = mul_2exp(S, -(level + 1));
        if (have_prev) {
            diff = (q - q_prev).upper_abs();
            if (level >= 3 && below_2exp(diff, tol_exp)) {
                converged = true;
            }
        }
        q_prev = q;
        have_prev = true;
        if (converged) break;
    }
    BigReal out = q;
    if (!diff.is_zero()) out.add_radius(diff.raw());
    out.add_radius_2exp(thresh + 6);
    if (!converged) {
        // Leave an honest (large) radius reflecting the last level jump.
        out.add_radius(diff.raw());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Segment integrals of a Bessel product over [lo, hi], 0 < lo < hi, used to
// extend cumulative maps.  Wide intervals are cut into width-1 pieces in
// log u (the integrand is analytic in the strip |Im log u| < pi/2); narrow
// ones use a single panel in u.  Each piece runs at two rule orders and the
// difference is added to the radius.

inline constexpr long kGLLadder[] = {12, 16, 24, 32, 48, 64, 96, 128, 176, 232, 304, 384};
inline constexpr long kGLLadderLen = static_cast<long>(sizeof(kGLLadder) / sizeof(long));

inline BigReal gl_piece(const BesselProduct& g, const BigReal& A, const BigReal& B,
                        bool logspace, long order, long wp) {
    const GLRule& rule = gauss_legendre(order, wp);
    BigReal sum(wp);
    if (!logspace) {
        BigReal mid = mul_2exp(A + B, -1);
        BigReal half = mul_2exp(B - A, -1);
        for (size_t i = 0; i < rule.x.size(); ++i) {
            BigReal u = mid + half * rule.x[i];
            BesselValues v = bessel_all(u, wp, g.mask());
            sum += eval_product(g, u, v, wp) * rule.w[i];
        }
        return sum * half;
    }
    // u = sqrt(AB) exp(hw * t), t in [-1,1], du = u hw dt
    BigReal C = sqrt(A * B);
    BigReal hw = mul_2exp(log(B / A), -1);
    for (size_t i = 0; i < rule.x.size(); ++i) {
        BigReal u = C * exp(hw * rule.x[i]);
        BesselValues v = bessel_all(u, wp, g.mask());
        sum += eval_product(g, u, v, wp) * u * rule.w[i];
    }
    return sum * hw;
}

inline BigReal segment_integral(const BesselProduct& g, const BigReal& lo,
                                const BigReal& hi, long wp, long tol_exp) {
    double ratio = (hi / lo).to_double();
    bool logspace;
    long pieces;
    double rho;
    if (std::isfinite(ratio) && ratio <= 2.72) {
        logspace = false;
        pieces = 1;
        double r = std::max(ratio, 1.0 + 1e-14);
        rho = (std::sqrt(r) + 1.0) * (std::sqrt(r) + 1.0) / (r - 1.0);
        rho = std::min(rho, 1e8);
    } else {
        logspace = true;
        BigReal W = log(hi / lo);
        double wd = W.to_double();
        pieces = static_cast<long>(std::ceil(wd - 1e-12));
        if (pieces < 1) pieces = 1;
        double s = M_PI / (wd / static_cast<double>(pieces));
        rho = s + std::sqrt(s * s + 1.0);
    }
    long n_target = static_cast<long>(std::ceil(
                        static_cast<double>(-tol_exp) * 0.6931471805599453 /
                        (2.0 * std::log(rho)))) + 2;
    long li = 0;
    while (li < kGLLadderLen - 2 && kGLLadder[li] < n_target) ++li;
    long n_lo = kGLLadder[li];
    long n_hi = kGLLadder[li + 1];

    std::vector<BigReal> cuts;
    cuts.reserve(static_cast<size_t>(pieces) + 1);
    cuts.push_back(lo);
    if (pieces > 1) {
        BigReal step = exp(log(hi / lo) / BigReal(pieces, wp));
        for (long k = 1; k < pieces; ++k) cuts.push_back(cuts.back() * step);
    }
    cuts.push_back(hi);

    BigReal q_hi(wp), q_lo(wp);
    for (long k = 0; k < pieces; ++k) {
        q_hi += gl_piece(g, cuts[static_cast<size_t>(k)], cuts[static_cast<size_t>(k) + 1],
                         logspace, n_hi, wp);
        q_lo += gl_piece(g, cuts[static_cast<size_t>(k)], cuts[static_cast<size_t>(k) + 1],
                         logspace, n_lo, wp);
    }
    BigReal out = q_hi;
    BigReal gap = (q_hi - q_lo).upper_abs();
    if (!gap.is_zero()) out.add_radius(gap.raw());
    out.add_radius_2exp(tol_exp - 3);
    return out;
}

// ---------------------------------------------------------------------------
// Cumulative inner integrals G(u) = int_0^u g, shared per (product, precision).
// Values extend from the nearest known point; tolerances relax where the outer
// integrand makes the contribution negligible (deep in the exponential tail,
// and toward 0 when the outer product vanishes there).

inline long cumulative_relax_bits(const BigReal& lo, const BigReal& hi, bool tail_ok,
                                  long outer_zero_exp, long base_tol_exp) {
    long relax = 0;
    long e_hi = exp_of(hi);
    if (outer_zero_exp >= 1 && e_hi < -8)
        relax = std::max(relax, outer_zero_exp * (-e_hi - 2) - 8);
    if (tail_ok) {
        double lod = lo.to_double();
        if (std::isfinite(lod) && lod >= 6.0)
            relax = std::max(relax, static_cast<long>(2.59 * std::min(lod, 1.0e6)));
    }
    long cap = std::max(0L, -base_tol_exp - 30);
    return std::min(relax, cap);
}

inline BigReal cumulative_inner(const BesselProduct& g, const BigReal& u, long wp,
                                long base_tol_exp, bool tail_ok, long outer_zero_exp) {
    QuadCaches& qc = quad_caches();
    auto mapkey = std::make_pair(g, wp);
    CumulativeMap* gm;
    {
        std::lock_guard<std::mutex> lock(qc.gmu);
        gm = &qc.gmaps[mapkey];
        auto hit = gm->find(u);
        if (hit != gm->end()) return hit->second;
    }
    // Choose an anchor and integrate across the gap; fall back to a direct
    // integral from 0 when the map is empty.
    BigReal anchor_u(wp), anchor_v(wp), value(wp);
    bool have_anchor = false;
    {
        std::lock_guard<std::mutex> lock(qc.gmu);
        if (!gm->empty()) {
            auto above = gm->lower_bound(u);
            if (above == gm->end()) {
                auto below = std::prev(above);
                anchor_u = below->first;
                anchor_v = below->second;
            } else if (above == gm->begin()) {
                anchor_u = above->first;
                anchor_v = above->second;
            } else {
                auto below = std::prev(above);
                long du_below = exp_of(u) - exp_of(below->first);
                long du_above = exp_of(above->first) - exp_of(u);
                if (du_below <= du_above) {
                    anchor_u = below->first;
                    anchor_v = below->second;
                } else {
                    anchor_u = above->first;
                    anchor_v = above->second;
                }
            }
            have_anchor = true;
        }
    }
    if (!have_anchor) {
        auto fn = [&](const BigReal& x, const BigReal&) {
            BigReal arg = u * x;
            BesselValues v = bessel_all(arg, wp, g.mask());
            return eval_product(g, arg, v, wp) * u;
        };
        value = tanh_sinh_unit(fn, wp, base_tol_exp);
    } else {
        int side = u.cmp(anchor_u);
        if (side == 0) return anchor_v;
        const BigReal& lo = side > 0 ? anchor_u : u;
        const BigReal& hi = side > 0 ? u : anchor_u;
        long tol = base_tol_exp + cumulative_relax_bits(lo, hi, tail_ok, outer_zero_exp,
                                                        base_tol_exp);
        BigReal inc = segment_integral(g, lo, hi, wp, tol);
        value = side > 0 ? anchor_v + inc : anchor_v - inc;
    }
    std::lock_guard<std::mutex> lock(qc.gmu);
    auto ins = gm->emplace(u, value);
    return ins.first->second;
}

// ---------------------------------------------------------------------------
// Closed-form envelopes used to drop provably negligible regions.  On
// (0, 1/2]: K0 <= 1.35 (-ln u), K1 <= 1/u, I0 <= 1.07, I1 <= 0.52 u, hence
// |f| <= C_f u^{e_f} (-ln u)^{a_f} with e_f the zero exponent.  Each ratio is
// increasing in u, so checking the right endpoint settles the constant.

inline double small_u_bound_const(const BesselProduct& f) {
    return std::pow(1.35, static_cast<double>(f.a)) *
           std::pow(1.07, static_cast<double>(f.c)) *
           std::pow(0.52, static_cast<double>(f.d));
}

// int_0^U u^e (-ln u)^m du for integer e >= 0, valid and positive for U <= 1/4
inline BigReal power_log_integral(long e, long m, const BigReal& U, long wp) {
    BigReal L = -log(U);
    BigReal Upow = pow_ui(U, static_cast<unsigned long>(e + 1));
    BigReal sum(wp);
    BigReal fall(1L, wp);                       // m (m-1) ... falling factorial
    BigReal einv = BigReal(1L, wp) / BigReal(e + 1, wp);
    BigReal coef = einv;
    for (long i = 0; i <= m; ++i) {
        sum += fall * coef * pow_ui(L, static_cast<unsigned long>(m - i));
        fall = fall * BigReal(m - i, wp);
        coef = coef * einv;
    }
    return Upow * sum;
}

// Upper bound for int_0^U f(u) G(u) du with G(u) = int_0^u g, for U <= 2^-10.
inline BigReal nested_zero_tail_bound(const BesselProduct& f, const BesselProduct& g,
                                      const BigReal& U, long wp) {
    double cf = small_u_bound_const(f) * small_u_bound_const(g) * 1.01;
    long eg = g.zero_exponent();
    long ef = f.zero_exponent();
    long mg = g.a;
    long mf = f.a;
    // G(u) <= C_g u^{eg+1} sum_i gcoef_i (-ln u)^{mg-i}
    BigReal total(wp);
    BigReal fall(1L, wp);
    BigReal einv = BigReal(1L, wp) / BigReal(eg + 1, wp);
    BigReal coef = einv;
    for (long i = 0; i <= mg; ++i) {
        BigReal gi = fall * coef;
        total += gi * power_log_integral(ef + eg + 1, mf + mg - i, U, wp);
        fall = fall * BigReal(mg - i, wp);
        coef = coef * einv;
    }
    BigReal cbig(wp);
    mpfr_set_d(cbig.raw(), cf, MPFR_RNDU);
    return total.upper_abs() * cbig;
}

// log2 bound on the total inner mass int_0^inf |g|: the small-u envelope on
// (0, 1/2] integrates in closed form, and beyond 1/2 every K factor is at
// most 2.8 e^{-u} while every I factor is at most e^u, leaving a u^p e^{-ku}
// tail with k the decay order.
inline double g_total_log2_bound(const BesselProduct& g) {
    constexpr double ln2 = 0.69314718055994531;
    long e = g.zero_exponent();
    long lm = g.a;
    double A = 0.0;
    double fall = 1.0;
    double einv = 1.0 / static_cast<double>(e + 1);
    double coef = einv;
    for (long i = 0; i <= lm; ++i) {
        A += fall * coef * std::pow(ln2, static_cast<double>(lm - i));
        fall *= static_cast<double>(lm - i);
        coef *= einv;
    }
    A *= small_u_bound_const(g) * std::pow(0.5, static_cast<double>(e + 1));
    long kap = g.decay_order();
    double kinv = 1.0 / static_cast<double>(kap);
    double B = 0.0;
    if (g.p >= 0) {
        double fac = kinv;
        for (long j = 0; j <= g.p; ++j) {
            B += fac * std::pow(0.5, static_cast<double>(g.p - j));
            fac *= static_cast<double>(g.p - j) * kinv;
        }
    } else {
        B = std::pow(2.0, static_cast<double>(-g.p)) * kinv;
    }
    B *= std::pow(2.8, static_cast<double>(g.a + g.b)) *
         std::exp(-0.5 * static_cast<double>(kap));
    return std::log2(A + B) + 1.0;
}

// log2 bound on one weighted node term, used to count a far-tail node as
// small without evaluating it (the alternative is a Bessel call at an
// astronomical argument).  Ray side: u^p 2.8^{a+b} e^{-ku} for u >= 1.
// Unit side, x <= 1/2 only: the small-u envelope.  A nested factor G(x) is
// bounded by the total inner mass.  Returns +inf-like when no envelope
// applies; the caller compares against the threshold with wide slack, which
// also absorbs the double rounding here.
inline double skip_term_log2_bound(const BesselProduct& f, bool nested,
                                   double glim_log2, Panel kind, long sign,
                                   const PanelNode& node) {
    if (node.wbase.is_zero()) return -1e18;
    long ex = exp_of(node.x);
    double b = static_cast<double>(exp_of(node.wbase)) + 1.0 + 4.0;
    if (nested) b += glim_log2;
    if (kind == Panel::ray) {
        if (ex > 100) return -1e18;
        double ulo = std::ldexp(1.0, static_cast<int>(ex) - 1);
        b += static_cast<double>(f.p) * static_cast<double>(f.p >= 0 ? ex : ex - 1);
        b += 1.5 * static_cast<double>(f.a + f.b);
        b -= static_cast<double>(f.decay_order()) * ulo * 1.4426950408889634;
        return b;
    }
    if (sign > 0 || ex > -1) return 1e18;
    long e0 = f.zero_exponent();
    b += static_cast<double>(e0) * static_cast<double>(e0 >= 0 ? ex : ex - 1);
    double Ln = 0.6932 * (1.0 - static_cast<double>(ex));
    b += static_cast<double>(f.a) * (0.44 + std::log2(std::max(Ln, 1.0)));
    b += 0.1 * static_cast<double>(f.c);
    return b;
}

// ---------------------------------------------------------------------------
// The shared level walker.  A batch of integrands (plain or nested) advances
// through trapezoid levels on one panel, reusing nodes and Bessel values.

struct WalkItem {
    BesselProduct f;
    bool nested = false;
    BesselProduct g{};
    bool tail_relax = false;
    double glim_log2 = 0.0;

    BigReal S;
    BigReal q;
    BigReal q_prev;
    BigReal diff;
    bool have_prev = false;
    bool converged = false;
    long thresh_exp = 0;
    int small_run = 0;
    bool frozen = false;
    BigReal u_cut;
    BigReal extra_radius;
};

inline void walk_panel(Panel kind, std::vector<WalkItem>& items, long wp, long bits) {
    unsigned want = 0;
    for (const WalkItem& it : items) want |= it.f.mask();
    long inner_tol = -(bits + 20);
    for (WalkItem& it : items) {
        it.S = BigReal(wp);
        it.q = BigReal(wp);
        it.q_prev = BigReal(wp);
        it.diff = BigReal(wp);
        it.have_prev = false;
        it.converged = false;
        it.thresh_exp = -(bits + 14);
        it.frozen = false;
        it.extra_radius = BigReal(wp);
    }
    auto add_node = [&](WalkItem& it, const PanelNode& node, const BesselValues& vals)
        -> BigReal {
        BigReal term = eval_product(it.f, node.x, vals, wp);
        if (it.nested)
            term = term * cumulative_inner(it.g, node.x, wp, inner_tol, it.tail_relax,
                                           it.f.zero_exponent());
        return term * node.wbase;
    };
    {
        const PanelNode& n0 = panel_node(kind, 0, wp);
        const BesselValues& v0 = bessel_at_node(kind, 0, wp, want);
        for (WalkItem& it : items) it.S += add_node(it, n0, v0);
    }
    bool all_converged = false;
    long level = 0;
    for (level = 0; level <= kQuadMaxLevel; ++level) {
        long step = 1L << (kTGridBits - 1 - level);
        for (int dirpass = 0; dirpass < 2; ++dirpass) {
            long sign = dirpass == 0 ? 1 : -1;
            for (WalkItem& it : items) it.small_run = 0;
            for (long m = 0;; ++m) {
                long mult = (level == 0) ? (m + 1) : (2 * m + 1);
                long idx = sign * step * mult;
                double tabs = std::abs(static_cast<double>(idx)) / 4096.0;
                if (tabs > kTailTMax) break;
                const PanelNode& node = panel_node(kind, idx, wp);
                const BesselValues* vals = nullptr;
                bool all_small = true;
                for (WalkItem& it : items) {
                    if (it.frozen && sign < 0 && kind == Panel::unit &&
                        mpfr_cmp(node.x.raw(), it.u_cut.raw()) <= 0) {
                        continue;  // covered by the analytic bound below u_cut
                    }
                    if (skip_term_log2_bound(it.f, it.nested, it.glim_log2, kind,
                                             sign, node) <
                        static_cast<double>(it.thresh_exp - 14)) {
                        // Provably far below threshold: count it as a small
                        // term without evaluating anything at this node.  The
                        // tail allowance in the finalization covers the sum of
                        // everything dropped this way.
                        ++it.small_run;
                        if (it.small_run < 4) all_small = false;
                        continue;
                    }
                    if (vals == nullptr) vals = &bessel_at_node(kind, idx, wp, want);
                    BigReal term = add_node(it, node, *vals);
                    it.S += term;
                    if (below_2exp(term, it.thresh_exp)) {
                        ++it.small_run;
                    } else {
                        it.small_run = 0;
                    }
                    if (it.small_run < 4) all_small = false;
                    // Nested integrands may close the 0 end analytically once
                    // the remaining mass is provably below threshold.
                    if (it.nested && !it.frozen && kind == Panel::unit && sign < 0 &&
                        exp_of(node.x) < -10) {
                        BigReal bound = nested_zero_tail_bound(it.f, it.g, node.x, wp);
                        if (below_2exp(bound, it.thresh_exp - 2)) {
                            it.frozen = true;
                            it.u_cut = node.x;
                            it.extra_radius += mul_2exp(bound, 2);
                        }
                    }
                }
                if (all_small && tabs >= 1.5) break;
            }
        }
        all_converged = true;
        for (WalkItem& it : items) {
            it.q = mul_2exp(it.S, -(level + 1));
            if (it.have_prev) {
                it.diff = (it.q - it.q_prev).upper_abs();
                long scale = std::max(exp_of(it.q), 0L);
                it.converged = level >= 3 && below_2exp(it.diff, scale - bits - 4);
                it.thresh_exp = scale - bits - 14;
            }
            it.q_prev = it.q;
            it.have_prev = true;
            if (!it.converged) all_converged = false;
        }
        if (all_converged && level >= 4) break;
    }
    for (WalkItem& it : items) {
        if (!it.diff.is_zero()) it.q.add_radius(it.diff.raw());
        it.q.add_radius_2exp(it.thresh_exp + 6);
        BigReal extra = it.extra_radius.upper_abs();
        if (!extra.is_zero()) it.q.add_radius(extra.raw());
        if (it.nested) it.q.add_radius_2exp(-(bits + 18));  // abscissa/map cross terms
    }
}

struct BatchSpec {
    BesselProduct f;
    bool nested = false;
    BesselProduct g{};
};

inline std::vector<BigReal> evaluate_batch(const std::vector<BatchSpec>& specs,
                                           const Precision& prec) {
    long bits = prec.bits();
    double worst = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        long wp = attempt == 0 ? bits + 48 : bits + bits / 2 + 80;
        std::vector<WalkItem> items(specs.size());
        for (size_t i = 0; i < specs.size(); ++i) {
            items[i].f = specs[i].f;
            items[i].nested = specs[i].nested;
            items[i].g = specs[i].g;
            items[i].tail_relax = specs[i].nested && specs[i].f.decay_order() >= 2;
            if (specs[i].nested)
                items[i].glim_log2 = g_total_log2_bound(specs[i].g);
        }
        std::vector<WalkItem> ray = items;
        walk_panel(Panel::unit, items, wp, bits);
        walk_panel(Panel::ray, ray, wp, bits);
        std::vector<BigReal> out;
        out.reserve(specs.size());
        bool ok = true;
        for (size_t i = 0; i < specs.size(); ++i) {
            BigReal total = items[i].q + ray[i].q;
            // Absolute target, or the same number of significant digits for
            // values above 1 (high Bessel powers reach factorial magnitudes).
            bool met = total.is_finite() && total.radius_below_pow10(prec.target_digits);
            if (!met && total.is_finite() && exp_of(total) > 0 &&
                !mpfr_zero_p(total.raw_radius())) {
                long need = exp_of(total) -
                            static_cast<long>(static_cast<double>(prec.target_digits) *
                                              3.3219280948873623) -
                            2;
                met = mpfr_get_exp(total.raw_radius()) <= need;
            }
            if (!met) {
                ok = false;
                worst = total.is_finite() ? total.log10_radius() : 0.0;
            }
            out.push_back(std::move(total));
        }
        if (ok) return out;
    }
    throw PrecisionError("quadrature: certified radius misses the target", worst);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public interface.

inline BigReal moment(const BesselProduct& f, const Precision& prec) {
    f.validate();
    return detail::evaluate_batch({detail::BatchSpec{f, false, {}}}, prec)[0];
}

inline std::vector<BigReal> moment_batch(const std::vector<BesselProduct>& fs,
                                         const Precision& prec) {
    std::vector<detail::BatchSpec> specs;
    specs.reserve(fs.size());
    for (const BesselProduct& f : fs) {
        f.validate();
        specs.push_back(detail::BatchSpec{f, false, {}});
    }
    return detail::evaluate_batch(specs, prec);
}

// int_0^inf f(u) [ int_0^u g(x) dx ] du
inline BigReal nested_moment(const BesselProduct& f, const BesselProduct& g,
                             const Precision& prec) {
    validate_nested_pair(f, g);
    return detail::evaluate_batch({detail::BatchSpec{f, true, g}}, prec)[0];
}

// int_0^inf f(u) [ int_u^inf g(x) dx ] du, computed by exchanging the order of
// integration: it equals int_0^inf g(x) [ int_0^x f(u) du ] dx.
inline BigReal nested_moment_upper(const BesselProduct& f, const BesselProduct& g,
                                   const Precision& prec) {
    return nested_moment(g, f, prec);
}

// The sunrise-style combination evaluated by the fifth acceptance criterion:
// 8 Z(f3,g1) - 4 [Z(f1,h1) - Z(f1,h2)] + int u^3 K0^4 K1^2, with
// f_n = u^n K0^2 K1^2, g1 = u K0^2 K1 I1, h1 = u^3 K0 K1^2 I0, h2 = u^3 K0^2 K1 I1.
inline BigReal i_rho2_alpha6(const Precision& prec) {
    Precision inner = prec.with_extra_digits(4);
    BesselProduct f3{3, 2, 2, 0, 0};
    BesselProduct g1{1, 2, 1, 0, 1};
    BesselProduct f1{1, 2, 2, 0, 0};
    BesselProduct h1{3, 1, 2, 1, 0};
    BesselProduct h2{3, 2, 1, 0, 1};
    BesselProduct tail{3, 4, 2, 0, 0};
    BigReal z31 = nested_moment(f3, g1, inner);
    BigReal z11 = nested_moment(f1, h1, inner);
    BigReal z12 = nested_moment(f1, h2, inner);
    return mul_2exp(z31, 3) - mul_2exp(z11 - z12, 2) + moment(tail, inner);
}

// Normalized rows of the two classical limit families:
//   with_u:    2^{n-1} / n!  int_0^inf u K0(u)^n du   ->  e^{-2 gamma}
//   without_u: 1 / n!        int_0^inf   K0(u)^n du   ->  2 e^{-gamma}
struct LimitSweepRow {
    long n = 0;
    BigReal with_u;
    BigReal without_u;
};

inline std::vector<LimitSweepRow> limit_sweep(long n_max, const Precision& prec) {
    if (n_max < 1) throw DomainError("limit_sweep: n_max must be >= 1");
    std::vector<BesselProduct> fs;
    fs.reserve(static_cast<size_t>(2 * n_max));
    for (long n = 1; n <= n_max; ++n) {
        fs.push_back(BesselProduct{1, n, 0, 0, 0});
        fs.push_back(BesselProduct{0, n, 0, 0, 0});
    }
    std::vector<BigReal> vals = moment_batch(fs, prec);
    long wp = prec.bits() + 32;
    std::vector<LimitSweepRow> rows;
    rows.reserve(static_cast<size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) {
        LimitSweepRow row;
        row.n = n;
        BigInt two_pow = pow_int(BigInt(2), static_cast<unsigned long>(n - 1));
        BigRational wu = make_rational(two_pow, factorial(static_cast<unsigned long>(n)));
        BigRational wo = make_rational(BigInt(1), factorial(static_cast<unsigned long>(n)));
        row.with_u = vals[static_cast<size_t>(2 * (n - 1))] * to_bigreal(wu, wp);
        row.without_u = vals[static_cast<size_t>(2 * (n - 1) + 1)] * to_bigreal(wo, wp);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bessellab

#endif

#ifndef BESSELLAB_SPECFUN_HPP
#define BESSELLAB_SPECFUN_HPP

// Certified evaluation of the special functions the moment integrals need:
// modified Bessel functions I0, I1, K0, K1, the Riemann zeta function at
// integer argument, the trigamma function at rational argument, and Euler's
// constant.  Every routine returns a BigReal ball whose radius accounts for
// series truncation and for the rounding of each arithmetic step.

#include <map>
#include <mutex>
#include <tuple>
#include <cmath>
#include "bessellab/bigreal.hpp"
#include "bessellab/rational.hpp"
#include "bessellab/exceptions.hpp"

namespace bessellab {

enum BesselMask : unsigned {
    kNeedI0 = 1u << 0,
    kNeedI1 = 1u << 1,
    kNeedK0 = 1u << 2,
    kNeedK1 = 1u << 3,
};

struct BesselValues {
    BigReal i0, i1, k0, k1;
};

namespace detail {

inline long round_up_prec(long bits, long quantum = 256) {
    return ((bits + quantum - 1) / quantum) * quantum;
}

struct SpecfunCaches {
    std::mutex mu;
    std::map<long, BigReal> gamma_by_prec;
    std::map<std::pair<unsigned long, long>, BigReal> zeta_by;
    std::map<std::tuple<long, long, long>, BigReal> trigamma_by;
};

inline SpecfunCaches& specfun_caches() {
    static SpecfunCaches c;
    return c;
}

// Euler's constant from the harmonic-number expansion
//   H_N = ln N + g + 1/(2N) - sum_{j>=1} B_{2j}/(2j N^{2j}),
// with N a power of two so ln N is an exact multiple of ln 2.  The tail of
// the Bernoulli sum is bounded by twice its first omitted term.
inline BigReal euler_gamma_at(long wp) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        long J = std::max<long>(48, wp / 14) << attempt;
        double nmin = (static_cast<double>(J) / (M_PI * M_E)) *
                      std::pow(2.0, static_cast<double>(wp + 9) / (2.0 * J));
        long N = 1, log2N = 0;
        while (static_cast<double>(N) < nmin * 1.25 + 8.0) { N <<= 1; ++log2N; }

        mpfr_t H, inv, em, pw, winv2, term;
        mpfr_inits2(wp, H, inv, em, pw, winv2, term, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_zero(H, 1);
        for (long m = 1; m <= N; ++m) {
            mpfr_set_ui(inv, static_cast<unsigned long>(m), MPFR_RNDN);
            mpfr_ui_div(inv, 1, inv, MPFR_RNDN);
            mpfr_add(H, H, inv, MPFR_RNDN);
        }

        // Bernoulli correction sum_{j} B_{2j}/(2j N^{2j}); terms alternate in
        // sign and must fall below 2^-(wp+8) before j exceeds J.
        mpfr_set_zero(em, 1);
        mpfr_set_ui(pw, 1, MPFR_RNDN);
        mpfr_set_ui(winv2, static_cast<unsigned long>(N), MPFR_RNDN);
        mpfr_ui_div(winv2, 1, winv2, MPFR_RNDN);
        mpfr_sqr(winv2, winv2, MPFR_RNDN);
        bool converged = false;
        mpfr_exp_t prev_exp = mpfr_get_emax();
        for (long j = 1; j <= J; ++j) {
            mpfr_mul(pw, pw, winv2, MPFR_RNDN);
            BigRational b = bernoulli(2 * static_cast<unsigned long>(j)) /
                            BigRational(2 * j);
            mpfr_mul_q(term, pw, b.get_mpq_t(), MPFR_RNDN);
            mpfr_add(em, em, term, MPFR_RNDN);
            if (mpfr_zero_p(term)) { converged = true; break; }
            mpfr_exp_t e = mpfr_get_exp(term);
            if (e < -(wp + 8)) { converged = true; break; }
            if (e >= prev_exp) break; // past the optimal truncation point
            prev_exp = e;
        }

        BigReal result;
        if (converged) {
            BigReal Hb(wp);
            mpfr_set(Hb.raw(), H, MPFR_RNDN);
            Hb.add_radius_2exp(log2N + 4 - wp);

            BigReal ln2b(wp);
            mpfr_const_log2(ln2b.raw(), MPFR_RNDN);
            ln2b.add_radius_2exp(-wp);
            BigReal lnNb = ln2b * BigReal(log2N, wp);

            BigReal halfinv(make_rational(BigInt(1), BigInt(2) * N), wp);

            BigReal emb(wp);
            mpfr_set(emb.raw(), em, MPFR_RNDN);
            emb.add_radius_2exp(-wp + 4);  // per-term rounding
            emb.add_radius_2exp(-wp - 7);  // truncation, twice the threshold

            result = Hb - lnNb - halfinv + emb;
        }
        mpfr_clears(H, inv, em, pw, winv2, term, static_cast<mpfr_ptr>(nullptr));
        if (converged) return result;
    }
    throw PrecisionError("euler_gamma: Bernoulli tail did not converge", 0.0);
}

} // namespace detail

// Euler's constant with radius at most 2^-(prec_bits+30).
inline BigReal euler_gamma(long prec_bits) {
    if (prec_bits < 8) prec_bits = 8;
    long wp = detail::round_up_prec(prec_bits + 64);
    auto& c = detail::specfun_caches();
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.gamma_by_prec.find(wp);
    if (it == c.gamma_by_prec.end())
        it = c.gamma_by_prec.emplace(wp, detail::euler_gamma_at(wp)).first;
    return it->second.rounded_to(prec_bits + 32);
}

namespace detail {

// P. Borwein's alternating-series algorithm for zeta at integer s >= 2.
// The Chebyshev weights d_k are computed exactly; the alternating sum runs
// in floating point with magnitudes of order d_n, so the relative rounding
// stays near machine level and the a-priori error bound
// 3/((3+sqrt 8)^n |1-2^{1-s}|) certifies the truncation.
inline BigReal zeta_at(unsigned long s, long wp) {
    long n = static_cast<long>((wp + 24) / 2.5431) + 2; // log2(3+sqrt 8) = 2.5431
    std::vector<BigRational> d(static_cast<size_t>(n) + 1);
    BigRational t(make_rational(BigInt(1), BigInt(n)));
    BigRational S = t;
    d[0] = BigRational(n) * S;
    for (long i = 1; i <= n; ++i) {
        t *= make_rational(BigInt(4) * (n + i - 1) * (n - i + 1),
                           BigInt(2 * i) * (2 * i - 1));
        S += t;
        d[static_cast<size_t>(i)] = BigRational(n) * S;
    }

    long wpf = wp + 48;
    mpfr_t A, summand;
    mpfr_inits2(wpf, A, summand, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(A, 1);
    for (long k = 0; k < n; ++k) {
        BigRational num = d[static_cast<size_t>(k)] - d[static_cast<size_t>(n)];
        mpfr_set_q(summand, num.get_mpq_t(), MPFR_RNDN);
        BigInt kp = pow_int(BigInt(k + 1), s);
        mpfr_div_z(summand, summand, kp.get_mpz_t(), MPFR_RNDN);
        if (k % 2 == 0) mpfr_add(A, A, summand, MPFR_RNDN);
        else mpfr_sub(A, A, summand, MPFR_RNDN);
    }
    // zeta = -A / (d_n (1 - 2^{1-s}))
    BigInt p2 = pow_int(BigInt(2), s - 1);
    BigRational den = d[static_cast<size_t>(n)] * make_rational(p2 - 1, p2);
    BigReal out(wp);
    mpfr_t denf;
    mpfr_init2(denf, wpf);
    mpfr_set_q(denf, den.get_mpq_t(), MPFR_RNDN);
    mpfr_div(A, A, denf, MPFR_RNDN);
    mpfr_neg(A, A, MPFR_RNDN);
    mpfr_set(out.raw(), A, MPFR_RNDN);
    mpfr_clears(A, summand, denf, static_cast<mpfr_ptr>(nullptr));
    out.add_radius_2exp(-wp - 12);
    return out;
}

} // namespace detail

// Riemann zeta at integer s >= 2, radius at most 2^-(prec_bits+10).
inline BigReal zeta(unsigned long s, long prec_bits) {
    if (s < 2) throw DomainError("zeta: argument must be an integer >= 2");
    if (prec_bits < 8) prec_bits = 8;
    long wp = detail::round_up_prec(prec_bits + 64);
    auto& c = detail::specfun_caches();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_pair(s, wp);
    auto it = c.zeta_by.find(key);
    if (it == c.zeta_by.end())
        it = c.zeta_by.emplace(key, detail::zeta_at(s, wp)).first;
    return it->second.rounded_to(prec_bits + 32);
}

namespace detail {

// Trigamma by direct summation of N terms of sum 1/(z+m)^2 followed by the
// Euler-Maclaurin expansion at w = z+N:
//   psi1(w) = 1/w + 1/(2w^2) + sum_{j>=1} B_{2j} w^{-(2j+1)},
// remainder bounded by twice the first omitted term.
inline BigReal trigamma_at(const BigRational& z, long wp) {
    BigInt p = z.get_num(), q = z.get_den();
    for (int attempt = 0; attempt < 4; ++attempt) {
        long J = std::max<long>(48, wp / 14) << attempt;
        double nmin = (static_cast<double>(J) / (M_PI * M_E)) *
                      std::pow(2.0, static_cast<double>(wp + 9) / (2.0 * J));
        long N = static_cast<long>(nmin * 1.25) + 8;

        mpfr_t part, term, denf, q2f, em, pw, winv, winv2;
        mpfr_inits2(wp, part, term, denf, q2f, em, pw, winv, winv2,
                    static_cast<mpfr_ptr>(nullptr));
        BigInt q2 = q * q;
        mpfr_set_z(q2f, q2.get_mpz_t(), MPFR_RNDN);
        mpfr_set_zero(part, 1);
        mpfr_exp_t emax = mpfr_get_emin();
        for (long m = 0; m < N; ++m) {
            BigInt den = p + BigInt(m) * q;
            mpfr_set_z(denf, den.get_mpz_t(), MPFR_RNDN);
            mpfr_sqr(denf, denf, MPFR_RNDN);
            mpfr_div(term, q2f, denf, MPFR_RNDN);
            mpfr_add(part, part, term, MPFR_RNDN);
            if (!mpfr_zero_p(term)) emax = std::max(emax, mpfr_get_exp(term));
        }

        BigInt wden = p + BigInt(N) * q; // w = wden/q
        mpfr_set_z(winv, q.get_mpz_t(), MPFR_RNDN);
        mpfr_set_z(winv2, wden.get_mpz_t(), MPFR_RNDN);
        mpfr_div(winv, winv, winv2, MPFR_RNDN); // q/wden = 1/w
        mpfr_sqr(winv2, winv, MPFR_RNDN);
        mpfr_set_zero(em, 1);
        mpfr_set(pw, winv, MPFR_RNDN);
        bool converged = false;
        mpfr_exp_t prev_exp = mpfr_get_emax();
        for (long j = 1; j <= J; ++j) {
            mpfr_mul(pw, pw, winv2, MPFR_RNDN); // w^-(2j+1)
            mpfr_mul_q(term, pw, bernoulli(2 * static_cast<unsigned long>(j)).get_mpq_t(),
                       MPFR_RNDN);
            mpfr_add(em, em, term, MPFR_RNDN);
            if (mpfr_zero_p(term)) { converged = true; break; }
            mpfr_exp_t e = mpfr_get_exp(term);
            if (e < -(wp + 8)) { converged = true; break; }
            if (e >= prev_exp) break;
            prev_exp = e;
        }

        BigReal result;
        if (converged) {
            long l3N = 2;
            while ((1L << l3N) < 3 * N) ++l3N;
            BigReal partb(wp);
            mpfr_set(partb.raw(), part, MPFR_RNDN);
            partb.add_radius_2exp(emax + l3N + 2 - wp);

            BigReal lead1(make_rational(q, wden), wp);
            BigReal lead2(make_rational(q2, BigInt(2) * wden * wden), wp);

            BigReal emb(wp);
            mpfr_set(emb.raw(), em, MPFR_RNDN);
            emb.add_radius_2exp(-wp + 4);
            emb.add_radius_2exp(-wp - 7);

            result = partb + lead1 + lead2 + emb;
        }
        mpfr_clears(part, term, denf, q2f, em, pw, winv, winv2,
                    static_cast<mpfr_ptr>(nullptr));
        if (converged) return result;
    }
    throw PrecisionError("trigamma: Bernoulli tail did not converge", 0.0);
}

} // namespace detail

// Trigamma psi'(z) for rational z > 0.
inline BigReal trigamma(const BigRational& z, long prec_bits) {
    if (sgn(z) <= 0) throw DomainError("trigamma: argument must be positive");
    if (prec_bits < 8) prec_bits = 8;
    long wp = detail::round_up_prec(prec_bits + 64);
    if (z.get_num().fits_slong_p() && z.get_den().fits_slong_p()) {
        auto key = std::make_tuple(z.get_num().get_si(), z.get_den().get_si(), wp);
        auto& c = detail::specfun_caches();
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.trigamma_by.find(key);
        if (it == c.trigamma_by.end())
            it = c.trigamma_by.emplace(key, detail::trigamma_at(z, wp)).first;
        return it->second.rounded_to(prec_bits + 32);
    }
    return detail::trigamma_at(z, wp).rounded_to(prec_bits + 32);
}

namespace detail {

// Power-series sums at the exact point m, all four families in one pass over
// the shared term t_k = (m^2/4)^k / (k!)^2:
//   I0       = sum t_k
//   I1 inner = sum t_k/(k+1)            (I1 = (m/2) * inner)
//   K0 inner = sum_{k>=1} H_k t_k       (K0 = K0inner - (ln(m/2)+g) I0)
//   K1 inner = sum (2H_k + 1/(k+1)) t_k/(k+1)
//                                       (K1 = 1/m + (ln(m/2)+g) I1 - (m/4) inner)
// Tail bounds use the geometric ratio q/(k+1)^2 <= 1/2 enforced at the stop.
inline void bessel_series_sums(mpfr_srcptr m, long wp, bool w_i1, bool w_k0, bool w_k1,
                               BigReal& i0_out, BigReal& i1_out,
                               BigReal& k0_out, BigReal& k1_out) {
    mpfr_t q, t, H, inv, s, tmp, coef, i0s, i1s, k0s, k1s;
    mpfr_inits2(wp, q, t, H, inv, s, tmp, coef, i0s, i1s, k0s, k1s,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_sqr(q, m, MPFR_RNDN);
    mpfr_div_2ui(q, q, 2, MPFR_RNDN);
    mpfr_set_ui(t, 1, MPFR_RNDN);
    mpfr_set_zero(H, 1);
    mpfr_set_ui(i0s, 1, MPFR_RNDN);
    mpfr_set_ui(i1s, 1, MPFR_RNDN);
    mpfr_set_zero(k0s, 1);
    mpfr_set_ui(k1s, 1, MPFR_RNDN);

    double xd = mpfr_get_d(m, MPFR_RNDN);
    long kmin = static_cast<long>(xd * 0.7072) + 1;
    long N = 0;
    for (long k = 1;; ++k) {
        unsigned long ku = static_cast<unsigned long>(k);
        mpfr_mul(t, t, q, MPFR_RNDN);
        mpfr_div_ui(t, t, ku, MPFR_RNDN);
        mpfr_div_ui(t, t, ku, MPFR_RNDN);
        mpfr_set_ui(inv, ku, MPFR_RNDN);
        mpfr_ui_div(inv, 1, inv, MPFR_RNDN);
        mpfr_add(H, H, inv, MPFR_RNDN);
        mpfr_add(i0s, i0s, t, MPFR_RNDN);
        if (w_k0) {
            mpfr_mul(tmp, t, H, MPFR_RNDN);
            mpfr_add(k0s, k0s, tmp, MPFR_RNDN);
        }
        if (w_i1 || w_k1) {
            mpfr_div_ui(s, t, ku + 1, MPFR_RNDN);
            mpfr_add(i1s, i1s, s, MPFR_RNDN);
            if (w_k1) {
                mpfr_set_ui(coef, ku + 1, MPFR_RNDN);
                mpfr_ui_div(coef, 1, coef, MPFR_RNDN);
                mpfr_t h2;
                mpfr_init2(h2, wp);
                mpfr_mul_2ui(h2, H, 1, MPFR_RNDN);
                mpfr_add(coef, coef, h2, MPFR_RNDN);
                mpfr_clear(h2);
                mpfr_mul(tmp, s, coef, MPFR_RNDN);
                mpfr_add(k1s, k1s, tmp, MPFR_RNDN);
            }
        }
        if (k >= kmin && !mpfr_zero_p(t) &&
            mpfr_get_exp(t) < mpfr_get_exp(i0s) - wp - 14) {
            N = k;
            break;
        }
        if (mpfr_zero_p(t) && k >= kmin) { N = k; break; }
        if (k > 40000000L) {
            mpfr_clears(q, t, H, inv, s, tmp, coef, i0s, i1s, k0s, k1s,
                        static_cast<mpfr_ptr>(nullptr));
            throw PrecisionError("bessel series failed to terminate", 0.0);
        }
    }

    // tail: for every family at most t (2H+5); rounding: at most
    // (8N + 4x + 64) ulps of magnitudes bounded by i0s (H+4).
    mpfr_t rad, w32;
    mpfr_init2(rad, BigReal::kRadiusPrec);
    mpfr_init2(w32, BigReal::kRadiusPrec);
    mpfr_mul_2ui(rad, H, 1, MPFR_RNDU);
    mpfr_add_ui(rad, rad, 5, MPFR_RNDU);
    mpfr_mul(rad, rad, t, MPFR_RNDU); // tail part

    mpfr_add_ui(w32, H, 4, MPFR_RNDU);
    mpfr_mul(w32, w32, i0s, MPFR_RNDU);
    double ops = 16.0 * static_cast<double>(N) + 8.0 * std::max(xd, 0.0) + 128.0;
    mpfr_mul_d(w32, w32, ops, MPFR_RNDU);
    mpfr_mul_2si(w32, w32, -wp, MPFR_RNDU);
    mpfr_add(rad, rad, w32, MPFR_RNDU);

    auto wrap = [&](mpfr_srcptr src, BigReal& dst) {
        dst = BigReal(wp);
        mpfr_set(dst.raw(), src, MPFR_RNDN);
        dst.add_radius(rad);
    };
    wrap(i0s, i0_out);
    if (w_i1 || w_k1) wrap(i1s, i1_out);
    if (w_k0) wrap(k0s, k0_out);
    if (w_k1) wrap(k1s, k1_out);

    mpfr_clear(rad);
    mpfr_clear(w32);
    mpfr_clears(q, t, H, inv, s, tmp, coef, i0s, i1s, k0s, k1s,
                static_cast<mpfr_ptr>(nullptr));
}

// Large-argument expansion K_nu(m) ~ sqrt(pi/2m) e^-m sum a_k(nu)/m^k with
// a_k = a_{k-1} (4nu^2 - (2k-1)^2)/(8k).  For real nu in {0,1} and m > 0 the
// remainder after any number of terms is bounded by the first omitted term,
// so the branch certifies itself: it reports failure when the terms bottom
// out before reaching the requested relative accuracy.
inline bool bessel_k_asym(mpfr_srcptr m, long wp, long rel_bits, BigReal& k0_out,
                          BigReal& k1_out, bool w_k0, bool w_k1) {
    BigReal pref(wp);
    {
        BigReal pi = BigReal::pi(wp);
        BigReal twoM(wp);
        mpfr_mul_2ui(twoM.raw(), m, 1, MPFR_RNDN);
        BigReal root = sqrt(pi / twoM);
        BigReal negm(wp);
        mpfr_neg(negm.raw(), m, MPFR_RNDN);
        pref = root * exp(negm);
    }
    if (pref.is_zero()) {
        // e^-m fell below the representable exponent range.  The true values
        // are positive but smaller than any normal number, so a zero centre
        // with a radius at the underflow threshold is an honest enclosure.
        BigReal tiny(wp);
        tiny.set_radius_2exp(mpfr_get_emin() + 64);
        if (w_k0) k0_out = tiny;
        if (w_k1) k1_out = tiny;
        return true;
    }

    for (int nu = 0; nu <= 1; ++nu) {
        if (nu == 0 && !w_k0) continue;
        if (nu == 1 && !w_k1) continue;
        mpfr_t term, sum, bound;
        mpfr_inits2(wp, term, sum, static_cast<mpfr_ptr>(nullptr));
        mpfr_init2(bound, BigReal::kRadiusPrec);
        mpfr_set_ui(term, 1, MPFR_RNDN);
        mpfr_set_ui(sum, 1, MPFR_RNDN);
        long fournu2 = 4L * nu * nu;
        mpfr_exp_t prev_exp = 1; // exponent of the leading term 1
        long nterms = 0;
        bool ok = false;
        for (long k = 1;; ++k) {
            long c = fournu2 - (2 * k - 1) * (2 * k - 1);
            mpfr_mul_si(term, term, c, MPFR_RNDN);
            mpfr_div_ui(term, term, 8 * static_cast<unsigned long>(k), MPFR_RNDN);
            mpfr_div(term, term, m, MPFR_RNDN);
            if (mpfr_zero_p(term)) {
                mpfr_set_zero(bound, 1);
                ok = true;
                break;
            }
            mpfr_exp_t e = mpfr_get_exp(term);
            if (e >= prev_exp) { // diverging: stop before this term
                mpfr_abs(bound, term, MPFR_RNDU);
                ok = (e < -(rel_bits + 4));
                break;
            }
            if (e < -(rel_bits + 10)) { // small enough: stop, bound by it
                mpfr_abs(bound, term, MPFR_RNDU);
                ok = true;
                break;
            }
            mpfr_add(sum, sum, term, MPFR_RNDN);
            prev_exp = e;
            ++nterms;
            if (k > 4 * wp + 1000) {
                mpfr_abs(bound, term, MPFR_RNDU);
                break;
            }
        }
        if (!ok) {
            mpfr_clears(term, sum, static_cast<mpfr_ptr>(nullptr));
            mpfr_clear(bound);
            return false;
        }
        BigReal sb(wp);
        mpfr_set(sb.raw(), sum, MPFR_RNDN);
        sb.add_radius(bound);
        long lgn = 1;
        while ((1L << lgn) < 4 * (nterms + 2)) ++lgn;
        sb.add_radius_2exp(-wp + lgn);
        BigReal val = pref * sb;
        if (nu == 0) k0_out = val; else k1_out = val;
        mpfr_clears(term, sum, static_cast<mpfr_ptr>(nullptr));
        mpfr_clear(bound);
    }
    return true;
}

// Large-argument expansion I_nu(m) ~ e^m / sqrt(2 pi m) sum (-1)^k a_k(nu)/m^k
// with the same a_k as above.  Terms are only used while they shrink, the
// regime where the Laplace-integral remainder stays below twice the first
// omitted term; the subdominant e^{-m} branch weighs ~ sqrt(m) e^{-2m}
// relative and is folded into the radius as a blanket.
inline bool bessel_i_asym(mpfr_srcptr m, long wp, long rel_bits, BigReal& i0_out,
                          BigReal& i1_out, bool w_i0, bool w_i1) {
    {
        // e^m must stay representable.
        mpfr_t lim;
        mpfr_init2(lim, 64);
        mpfr_set_si(lim, mpfr_get_emax() - 128, MPFR_RNDD);
        mpfr_mul_d(lim, lim, 0.6931471805599453, MPFR_RNDD);
        bool over = mpfr_cmp(m, lim) >= 0;
        mpfr_clear(lim);
        if (over) return false;
    }
    BigReal pref(wp);
    {
        BigReal pi = BigReal::pi(wp);
        BigReal twoPiM(wp);
        mpfr_mul_2ui(twoPiM.raw(), m, 1, MPFR_RNDN);
        BigReal mcopy(wp);
        mpfr_set(mcopy.raw(), m, MPFR_RNDN);
        pref = exp(mcopy) / sqrt(mul_2exp(pi, 1) * mcopy);
    }
    long sub_exp;  // subdominant branch blanket, ~ sqrt(m) e^{-2m} relative
    {
        double md = mpfr_get_d(m, MPFR_RNDD);
        sub_exp = static_cast<long>(-2.0 * md * 1.4426950408889634
                                    + 0.5 * std::log2(md)) + 8;
    }
    for (int nu = 0; nu <= 1; ++nu) {
        if (nu == 0 && !w_i0) continue;
        if (nu == 1 && !w_i1) continue;
        mpfr_t term, sum, bound;
        mpfr_inits2(wp, term, sum, static_cast<mpfr_ptr>(nullptr));
        mpfr_init2(bound, BigReal::kRadiusPrec);
        mpfr_set_ui(term, 1, MPFR_RNDN);
        mpfr_set_ui(sum, 1, MPFR_RNDN);
        long fournu2 = 4L * nu * nu;
        mpfr_exp_t prev_exp = 1;
        long nterms = 0;
        bool ok = false;
        for (long k = 1;; ++k) {
            // ratio ((2k-1)^2 - 4 nu^2) / (8 k m), the alternating twin of K's
            long c = (2 * k - 1) * (2 * k - 1) - fournu2;
            mpfr_mul_si(term, term, c, MPFR_RNDN);
            mpfr_div_ui(term, term, 8 * static_cast<unsigned long>(k), MPFR_RNDN);
            mpfr_div(term, term, m, MPFR_RNDN);
            if (mpfr_zero_p(term)) {
                mpfr_set_zero(bound, 1);
                ok = true;
                break;
            }
            mpfr_exp_t e = mpfr_get_exp(term);
            if (e >= prev_exp) {
                mpfr_abs(bound, term, MPFR_RNDU);
                ok = (e < -(rel_bits + 4));
                break;
            }
            if (e < -(rel_bits + 10)) {
                mpfr_abs(bound, term, MPFR_RNDU);
                ok = true;
                break;
            }
            mpfr_add(sum, sum, term, MPFR_RNDN);
            prev_exp = e;
            ++nterms;
            if (k > 4 * wp + 1000) {
                mpfr_abs(bound, term, MPFR_RNDU);
                break;
            }
        }
        if (!ok) {
            mpfr_clears(term, sum, static_cast<mpfr_ptr>(nullptr));
            mpfr_clear(bound);
            return false;
        }
        BigReal sb(wp);
        mpfr_set(sb.raw(), sum, MPFR_RNDN);
        mpfr_mul_2ui(bound, bound, 2, MPFR_RNDU);
        sb.add_radius(bound);
        sb.add_radius_2exp(sub_exp);
        long lgn = 1;
        while ((1L << lgn) < 4 * (nterms + 2)) ++lgn;
        sb.add_radius_2exp(-wp + lgn);
        BigReal val = pref * sb;
        if (nu == 0) i0_out = val; else i1_out = val;
        mpfr_clears(term, sum, static_cast<mpfr_ptr>(nullptr));
        mpfr_clear(bound);
    }
    return true;
}

// First-order transfer of the argument's own radius onto a function value.
// All four functions satisfy |d/dt log f| <= 1 + 3/t on (0, inf), so the
// supremum of |f| over [lo, hi] is at most |f(mid)| e^r (mid/lo)^3 and the
// derivative is bounded by that supremum times (1 + 3/lo).
inline void propagate_argument_radius(BigReal& f, const BigReal& x) {
    if (mpfr_zero_p(x.raw_radius())) return;
    mpfr_t lo, fac, w;
    mpfr_init2(lo, BigReal::kRadiusPrec);
    mpfr_init2(fac, BigReal::kRadiusPrec);
    mpfr_init2(w, BigReal::kRadiusPrec);
    mpfr_sub(lo, x.raw(), x.raw_radius(), MPFR_RNDD);
    if (mpfr_sgn(lo) <= 0) {
        f.make_infinite_radius();
    } else {
        mpfr_exp(fac, x.raw_radius(), MPFR_RNDU);          // e^r
        mpfr_div(w, x.raw(), lo, MPFR_RNDU);               // mid/lo
        mpfr_pow_ui(w, w, 3, MPFR_RNDU);
        mpfr_mul(fac, fac, w, MPFR_RNDU);
        mpfr_ui_div(w, 3, lo, MPFR_RNDU);                  // 3/lo
        mpfr_add_ui(w, w, 1, MPFR_RNDU);
        mpfr_mul(fac, fac, w, MPFR_RNDU);
        mpfr_mul(fac, fac, x.raw_radius(), MPFR_RNDU);
        mpfr_abs(w, f.raw(), MPFR_RNDU);
        mpfr_add(w, w, f.raw_radius(), MPFR_RNDU);
        mpfr_mul(fac, fac, w, MPFR_RNDU);
        f.add_radius(fac);
    }
    mpfr_clear(lo);
    mpfr_clear(fac);
    mpfr_clear(w);
}

inline bool relative_radius_ok(const BigReal& v, long prec_bits) {
    if (mpfr_zero_p(v.raw_radius())) return true;
    if (!v.is_finite()) return false;
    if (v.is_zero()) {
        // Underflow enclosure [0 +- tiny]: fine as long as the radius sits far
        // below anything a relative target at this precision could ask for.
        return mpfr_get_exp(v.raw_radius()) <= -8 * prec_bits - 256;
    }
    return mpfr_get_exp(v.raw_radius()) <= mpfr_get_exp(v.raw()) - prec_bits - 1;
}

} // namespace detail

// All requested Bessel values at x > 0 in one pass, each with relative error
// at most 2^-prec_bits.  The series branch absorbs the e^{2x} cancellation of
// the K sums by working with ceil(2x log2 e) extra bits; for x large enough
// that the divergent expansion can reach the target, the expansion is used
// instead and the series is the fallback.
inline BesselValues bessel_all(const BigReal& x, long prec_bits, unsigned mask) {
    if (x.sign() <= 0 || !x.is_finite())
        throw DomainError("bessel_all: argument must be positive and finite");
    {
        mpfr_t r4;
        mpfr_init2(r4, BigReal::kRadiusPrec);
        mpfr_mul_2ui(r4, x.raw_radius(), 2, MPFR_RNDU);
        bool too_wide = mpfr_cmp(r4, x.raw()) > 0;
        mpfr_clear(r4);
        if (too_wide) throw DomainError("bessel_all: argument interval too wide");
    }
    if (prec_bits < 8) prec_bits = 8;

    bool w_i0 = (mask & kNeedI0) != 0;
    bool w_i1 = (mask & kNeedI1) != 0;
    bool w_k0 = (mask & kNeedK0) != 0;
    bool w_k1 = (mask & kNeedK1) != 0;
    if (!(w_i0 || w_i1 || w_k0 || w_k1))
        throw DomainError("bessel_all: empty request mask");
    bool want_k = w_k0 || w_k1;
    bool want_i = w_i0 || w_i1;

    double xd = x.to_double();
    if (want_i &&
        xd * 1.4426950408889634 >
            static_cast<double>(mpfr_get_emax()) - 128.0)
        throw PrecisionError("bessel_all: e^x exceeds the exponent range", 1e18);
    double digits = static_cast<double>(prec_bits) * 0.30102999566398120;
    bool big_enough = 2.0 * xd * 0.43429448190325176 >= digits + 8.0;
    bool try_asym = want_k && big_enough;
    bool try_asym_i = want_i && big_enough;

    long extra_series = want_k ? static_cast<long>(2.0 * xd * 1.4426950408889634) + 16 : 0;

    BesselValues out;
    double worst_log10_radius = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        long base = prec_bits + 48;
        for (int a = 0; a < attempt; ++a) base += base / 2;

        bool k_done = false;
        if (try_asym && want_k) {
            long wpa = base;
            k_done = detail::bessel_k_asym(x.raw(), wpa, prec_bits + 8,
                                           out.k0, out.k1, w_k0, w_k1);
        }
        bool i_done = false;
        if (try_asym_i && want_i)
            i_done = detail::bessel_i_asym(x.raw(), base, prec_bits + 8,
                                           out.i0, out.i1, w_i0, w_i1);

        bool need_series_k = want_k && !k_done;
        long wp = base + (need_series_k ? extra_series : 0);
        bool series_i1 = (w_i1 && !i_done) || (need_series_k && w_k1);
        bool need_series = (want_i && !i_done) || need_series_k;
        if (need_series) {
            BigReal i0b, i1b, k0b, k1b;
            detail::bessel_series_sums(x.raw(), wp, series_i1,
                                       need_series_k && w_k0, need_series_k && w_k1,
                                       i0b, i1b, k0b, k1b);
            BigReal mhalf(wp);
            mpfr_div_2ui(mhalf.raw(), x.raw(), 1, MPFR_RNDN);
            BigReal i1full;
            if (series_i1) i1full = mhalf * i1b;
            if (w_i0 && !i_done) out.i0 = i0b;
            if (w_i1 && !i_done) out.i1 = i1full;
            if (need_series_k) {
                BigReal L(wp);
                int t = mpfr_log(L.raw(), mhalf.raw(), MPFR_RNDN);
                if (t != 0 && !mpfr_zero_p(L.raw()))
                    L.add_radius_2exp(mpfr_get_exp(L.raw()) - wp + 1);
                L = L + euler_gamma(wp);
                if (w_k0) out.k0 = k0b - L * i0b;
                if (w_k1) {
                    BigReal invm(wp);
                    int ti = mpfr_ui_div(invm.raw(), 1, x.raw(), MPFR_RNDN);
                    if (ti != 0) invm.add_radius_2exp(mpfr_get_exp(invm.raw()) - wp + 1);
                    BigReal mquarter(wp);
                    mpfr_div_2ui(mquarter.raw(), x.raw(), 2, MPFR_RNDN);
                    out.k1 = invm + L * i1full - mquarter * k1b;
                }
            }
        }

        bool all_ok = true;
        bool i_ok = true;
        bool k_ok = true;
        worst_log10_radius = -1e18;
        auto check = [&](bool wanted, const BigReal& v, bool& fam_ok) {
            if (!wanted) return;
            if (!detail::relative_radius_ok(v, prec_bits)) {
                all_ok = false;
                fam_ok = false;
            }
            worst_log10_radius = std::max(worst_log10_radius, v.log10_radius());
        };
        check(w_i0, out.i0, i_ok);
        check(w_i1, out.i1, i_ok);
        check(w_k0, out.k0, k_ok);
        check(w_k1, out.k1, k_ok);
        if (all_ok) {
            if (w_i0) detail::propagate_argument_radius(out.i0, x);
            if (w_i1) detail::propagate_argument_radius(out.i1, x);
            if (w_k0) detail::propagate_argument_radius(out.k0, x);
            if (w_k1) detail::propagate_argument_radius(out.k1, x);
            return out;
        }
        // Fall back to the series only for the family that missed, so an I
        // request at huge argument keeps its expansion.
        if (!k_ok) try_asym = false;
        if (!i_ok) try_asym_i = false;
    }
    throw PrecisionError("bessel_all: target precision not reached", worst_log10_radius);
}

inline BigReal bessel_i(int nu, const BigReal& x, long prec_bits) {
    if (nu != 0 && nu != 1) throw DomainError("bessel_i: order must be 0 or 1");
    BesselValues v = bessel_all(x, prec_bits, nu == 0 ? kNeedI0 : kNeedI1);
    return nu == 0 ? v.i0 : v.i1;
}

inline BigReal bessel_k(int nu, const BigReal& x, long prec_bits) {
    if (nu != 0 && nu != 1) throw DomainError("bessel_k: order must be 0 or 1");
    BesselValues v = bessel_all(x, prec_bits, nu == 0 ? kNeedK0 : kNeedK1);
    return nu == 0 ? v.k0 : v.k1;
}

} // namespace bessellab

#endif

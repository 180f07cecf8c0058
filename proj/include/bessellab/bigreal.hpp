#ifndef BESSELLAB_BIGREAL_HPP
#define BESSELLAB_BIGREAL_HPP

// Arbitrary-precision real with a certified error radius.
//
// The value is an MPFR float at an explicit per-object precision; the radius
// is a second, low-precision MPFR float updated with upward rounding, so every
// BigReal represents the interval [value - radius, value + radius].  This is
// deliberately one-sided ball arithmetic, not full interval arithmetic: each
// operation propagates a conservative first-order bound plus the rounding ulp
// of the newly computed centre.  MPFR (rather than double) holds the radius
// because radii around 1e-130 sit far below double's exponent range.

#include <mpfr.h>
#include <gmpxx.h>
#include <string>
#include <utility>
#include <cstdint>
#include "bessellab/exceptions.hpp"
#include "bessellab/precision.hpp"

namespace bessellab {

class BigReal {
public:
    static constexpr mpfr_prec_t kRadiusPrec = 32;

    BigReal() { init(64); mpfr_set_zero(v_, 1); }
    explicit BigReal(long prec_bits) { init(prec_bits); mpfr_set_zero(v_, 1); }

    BigReal(long value, long prec_bits) {
        init(prec_bits);
        int t = mpfr_set_si(v_, value, MPFR_RNDN);
        if (t != 0) bump_ulp();
    }

    BigReal(const mpz_class& value, long prec_bits) {
        init(prec_bits);
        int t = mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
        if (t != 0) bump_ulp();
    }

    BigReal(const mpq_class& value, long prec_bits) {
        init(prec_bits);
        int t = mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
        if (t != 0) bump_ulp();
    }

    BigReal(const char* decimal, long prec_bits) {
        init(prec_bits);
        if (mpfr_set_str(v_, decimal, 10, MPFR_RNDN) == -1)
            throw DomainError(std::string("BigReal: unparsable literal ") + decimal);
        bump_ulp();
    }

    BigReal(const BigReal& o) {
        init(mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        mpfr_set(r_, o.r_, MPFR_RNDU);
    }
    BigReal(BigReal&& o) noexcept {
        v_[0] = o.v_[0];
        r_[0] = o.r_[0];
        o.moved_ = true;
    }
    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            if (moved_) { init(mpfr_get_prec(o.v_)); moved_ = false; }
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
            mpfr_set(r_, o.r_, MPFR_RNDU);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) {
            if (!moved_) { mpfr_clear(v_); mpfr_clear(r_); }
            v_[0] = o.v_[0];
            r_[0] = o.r_[0];
            moved_ = false;
            o.moved_ = true;
        }
        return *this;
    }
    ~BigReal() {
        if (!moved_) { mpfr_clear(v_); mpfr_clear(r_); }
    }

    long prec() const { return mpfr_get_prec(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw_radius() { return r_; }
    mpfr_srcptr raw_radius() const { return r_; }

    bool is_finite() const { return mpfr_number_p(v_) && mpfr_number_p(r_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Exact-input marker: discard any accumulated radius.
    void clear_radius() { mpfr_set_zero(r_, 1); }

    void set_radius_2exp(long e) { mpfr_set_ui_2exp(r_, 1, e, MPFR_RNDU); }

    void add_radius(mpfr_srcptr extra) { mpfr_add(r_, r_, extra, MPFR_RNDU); }

    void add_radius_2exp(long e) {
        mpfr_t t;
        mpfr_init2(t, kRadiusPrec);
        mpfr_set_ui_2exp(t, 1, e, MPFR_RNDU);
        mpfr_add(r_, r_, t, MPFR_RNDU);
        mpfr_clear(t);
    }

    void make_infinite_radius() { mpfr_set_inf(r_, 1); }

    // Upper bound on |true value|.
    BigReal upper_abs() const {
        BigReal out(prec());
        mpfr_abs(out.v_, v_, MPFR_RNDU);
        mpfr_add(out.v_, out.v_, r_, MPFR_RNDU);
        return out;
    }

    // Lower bound on |true value| (0 when the interval straddles 0).
    BigReal lower_abs() const {
        BigReal out(prec());
        mpfr_abs(out.v_, v_, MPFR_RNDD);
        mpfr_sub(out.v_, out.v_, r_, MPFR_RNDD);
        if (mpfr_sgn(out.v_) < 0) mpfr_set_zero(out.v_, 1);
        return out;
    }

    // log10 of the radius; very negative when the radius is zero.
    double log10_radius() const {
        if (mpfr_zero_p(r_)) return -1e18;
        if (!mpfr_number_p(r_)) return 1e18;
        long e = mpfr_get_exp(r_);
        return static_cast<double>(e) * 0.30102999566398120;
    }

    // True when the certified absolute error is at most 10^(-digits).
    bool radius_below_pow10(long digits) const {
        if (mpfr_zero_p(r_)) return true;
        if (!mpfr_number_p(r_)) return false;
        mpfr_t t;
        mpfr_init2(t, 64);
        mpfr_set_si(t, -static_cast<long>(digits), MPFR_RNDN);
        mpfr_exp10(t, t, MPFR_RNDD);
        bool ok = mpfr_cmp(r_, t) <= 0;
        mpfr_clear(t);
        return ok;
    }

    int cmp(const BigReal& o) const { return mpfr_cmp(v_, o.v_); }
    int cmp_si(long s) const { return mpfr_cmp_si(v_, s); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Nearest integer to the centre.
    mpz_class to_nearest_mpz() const {
        mpz_class z;
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(v_));
        mpfr_rint(t, v_, MPFR_RNDN);
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
        mpfr_clear(t);
        return z;
    }

    // Scientific-notation decimal string with the given significant digits,
    // e.g. "1.0517997903e+0".  Parsing it back recovers the centre to within
    // one unit in the last printed place.
    std::string to_string(long digits) const {
        if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
        if (mpfr_zero_p(v_)) return "0";
        if (digits < 2) digits = 2;
        mpfr_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
        std::string m(s);
        mpfr_free_str(s);
        std::string sign;
        if (!m.empty() && m[0] == '-') { sign = "-"; m = m.substr(1); }
        // mpfr convention: value = 0.m * 10^e
        std::string out = sign + m.substr(0, 1) + "." + m.substr(1) + "e" +
                          (e - 1 >= 0 ? "+" : "") + std::to_string(static_cast<long>(e - 1));
        return out;
    }

    BigReal& operator+=(const BigReal& o) { *this = *this + o; return *this; }
    BigReal& operator-=(const BigReal& o) { *this = *this - o; return *this; }
    BigReal& operator*=(const BigReal& o) { *this = *this * o; return *this; }
    BigReal& operator/=(const BigReal& o) { *this = *this / o; return *this; }

    friend BigReal operator-(const BigReal& a) {
        BigReal out(a.prec());
        mpfr_neg(out.v_, a.v_, MPFR_RNDN);
        mpfr_set(out.r_, a.r_, MPFR_RNDU);
        return out;
    }

    friend BigReal abs(const BigReal& a) {
        BigReal out(a.prec());
        mpfr_abs(out.v_, a.v_, MPFR_RNDN);
        mpfr_set(out.r_, a.r_, MPFR_RNDU);
        return out;
    }

    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal out(std::max(a.prec(), b.prec()));
        int t = mpfr_add(out.v_, a.v_, b.v_, MPFR_RNDN);
        mpfr_add(out.r_, a.r_, b.r_, MPFR_RNDU);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal out(std::max(a.prec(), b.prec()));
        int t = mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
        mpfr_add(out.r_, a.r_, b.r_, MPFR_RNDU);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal out(std::max(a.prec(), b.prec()));
        int t = mpfr_mul(out.v_, a.v_, b.v_, MPFR_RNDN);
        // |d(ab)| <= |a| rb + |b| ra + ra rb
        mpfr_t w, acc;
        mpfr_init2(w, kRadiusPrec);
        mpfr_init2(acc, kRadiusPrec);
        mpfr_abs(w, a.v_, MPFR_RNDU);
        mpfr_mul(acc, w, b.r_, MPFR_RNDU);
        mpfr_abs(w, b.v_, MPFR_RNDU);
        mpfr_mul(w, w, a.r_, MPFR_RNDU);
        mpfr_add(acc, acc, w, MPFR_RNDU);
        mpfr_mul(w, a.r_, b.r_, MPFR_RNDU);
        mpfr_add(acc, acc, w, MPFR_RNDU);
        mpfr_set(out.r_, acc, MPFR_RNDU);
        mpfr_clear(w);
        mpfr_clear(acc);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal out(std::max(a.prec(), b.prec()));
        // |b| must be certifiably nonzero for a finite radius.
        mpfr_t lb;
        mpfr_init2(lb, kRadiusPrec);
        mpfr_abs(lb, b.v_, MPFR_RNDD);
        mpfr_sub(lb, lb, b.r_, MPFR_RNDD);
        int t = mpfr_div(out.v_, a.v_, b.v_, MPFR_RNDN);
        if (mpfr_sgn(lb) <= 0 || !mpfr_number_p(lb)) {
            out.make_infinite_radius();
        } else {
            // |d(a/b)| <= (ra + |a/b| rb) / (|b| - rb)
            mpfr_t w, acc;
            mpfr_init2(w, kRadiusPrec);
            mpfr_init2(acc, kRadiusPrec);
            mpfr_abs(w, out.v_, MPFR_RNDU);
            mpfr_mul(acc, w, b.r_, MPFR_RNDU);
            mpfr_add(acc, acc, a.r_, MPFR_RNDU);
            mpfr_div(acc, acc, lb, MPFR_RNDU);
            mpfr_set(out.r_, acc, MPFR_RNDU);
            mpfr_clear(w);
            mpfr_clear(acc);
            if (t != 0) out.bump_ulp();
        }
        mpfr_clear(lb);
        return out;
    }

    friend BigReal sqrt(const BigReal& a) {
        BigReal out(a.prec());
        if (mpfr_sgn(a.v_) < 0) throw DomainError("sqrt of negative BigReal");
        int t = mpfr_sqrt(out.v_, a.v_, MPFR_RNDN);
        mpfr_t lb;
        mpfr_init2(lb, kRadiusPrec);
        mpfr_sub(lb, a.v_, a.r_, MPFR_RNDD);
        if (mpfr_sgn(lb) > 0) {
            // |d sqrt| <= ra / (2 sqrt(lb))
            mpfr_sqrt(lb, lb, MPFR_RNDD);
            mpfr_mul_ui(lb, lb, 2, MPFR_RNDD);
            mpfr_div(out.r_, a.r_, lb, MPFR_RNDU);
        } else {
            // interval touches 0: |sqrt x - sqrt y| <= sqrt|x - y|
            mpfr_sqrt(out.r_, a.r_, MPFR_RNDU);
        }
        mpfr_clear(lb);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal exp(const BigReal& a) {
        BigReal out(a.prec());
        int t = mpfr_exp(out.v_, a.v_, MPFR_RNDN);
        // |d exp| <= exp(a) (e^{ra} - 1); exp(a) bounded by computed value rounded up
        mpfr_t w, eb;
        mpfr_init2(w, kRadiusPrec);
        mpfr_init2(eb, kRadiusPrec);
        mpfr_expm1(w, a.r_, MPFR_RNDU);
        mpfr_set(eb, out.v_, MPFR_RNDU);
        mpfr_mul_ui(eb, eb, 2, MPFR_RNDU); // slack for the centre's own rounding
        mpfr_mul(w, w, eb, MPFR_RNDU);
        mpfr_set(out.r_, w, MPFR_RNDU);
        mpfr_clear(w);
        mpfr_clear(eb);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal log(const BigReal& a) {
        if (mpfr_sgn(a.v_) <= 0) throw DomainError("log of nonpositive BigReal");
        BigReal out(a.prec());
        int t = mpfr_log(out.v_, a.v_, MPFR_RNDN);
        mpfr_t lb;
        mpfr_init2(lb, kRadiusPrec);
        mpfr_sub(lb, a.v_, a.r_, MPFR_RNDD);
        if (mpfr_sgn(lb) > 0) {
            mpfr_div(out.r_, a.r_, lb, MPFR_RNDU);
        } else {
            out.make_infinite_radius();
        }
        mpfr_clear(lb);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal pow_ui(const BigReal& a, unsigned long n) {
        if (n == 0) {
            BigReal one(1L, a.prec());
            return one;
        }
        BigReal out(a.prec());
        int t = mpfr_pow_ui(out.v_, a.v_, n, MPFR_RNDN);
        // |d(a^n)| <= n (|a|+ra)^{n-1} ra
        mpfr_t ub, w;
        mpfr_init2(ub, kRadiusPrec);
        mpfr_init2(w, kRadiusPrec);
        mpfr_abs(ub, a.v_, MPFR_RNDU);
        mpfr_add(ub, ub, a.r_, MPFR_RNDU);
        mpfr_pow_ui(w, ub, n - 1, MPFR_RNDU);
        mpfr_mul(w, w, a.r_, MPFR_RNDU);
        mpfr_mul_ui(w, w, n, MPFR_RNDU);
        mpfr_set(out.r_, w, MPFR_RNDU);
        mpfr_clear(ub);
        mpfr_clear(w);
        if (t != 0) out.bump_ulp();
        return out;
    }

    friend BigReal mul_2exp(const BigReal& a, long e) {
        BigReal out(a);
        mpfr_mul_2si(out.v_, out.v_, e, MPFR_RNDN);
        mpfr_mul_2si(out.r_, out.r_, e, MPFR_RNDU);
        return out;
    }

    // Same ball re-expressed at a different working precision.
    BigReal rounded_to(long prec_bits) const {
        BigReal out(prec_bits);
        int t = mpfr_set(out.v_, v_, MPFR_RNDN);
        mpfr_set(out.r_, r_, MPFR_RNDU);
        if (t != 0) out.bump_ulp();
        return out;
    }

    static BigReal pi(long prec_bits) {
        BigReal out(prec_bits);
        mpfr_const_pi(out.v_, MPFR_RNDN);
        out.bump_ulp();
        return out;
    }

private:
    void init(long prec_bits) {
        if (prec_bits < 2) prec_bits = 2;
        mpfr_init2(v_, prec_bits);
        mpfr_init2(r_, kRadiusPrec);
        mpfr_set_zero(r_, 1);
    }

    // Account one ulp of the freshly rounded centre into the radius.
    void bump_ulp() {
        if (!mpfr_number_p(v_) || mpfr_zero_p(v_)) return;
        long e = static_cast<long>(mpfr_get_exp(v_)) - static_cast<long>(mpfr_get_prec(v_));
        mpfr_t t;
        mpfr_init2(t, kRadiusPrec);
        mpfr_set_ui_2exp(t, 1, e, MPFR_RNDU);
        mpfr_add(r_, r_, t, MPFR_RNDU);
        mpfr_clear(t);
    }

    mpfr_t v_;
    mpfr_t r_;
    bool moved_ = false;
};

// |a - b| <= 10^(-digits), certified against both radii.
inline bool agree_to_digits(const BigReal& a, const BigReal& b, long digits) {
    BigReal d = a - b;
    return d.upper_abs().cmp((BigReal(1L, 64) / pow_ui(BigReal(10L, 64), static_cast<unsigned long>(digits)))) <= 0;
}

} // namespace bessellab

#endif

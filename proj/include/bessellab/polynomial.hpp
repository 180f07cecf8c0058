#ifndef BESSELLAB_POLYNOMIAL_HPP
#define BESSELLAB_POLYNOMIAL_HPP

// Dense univariate polynomials: IntPoly over the integers (continued-fraction
// catalog coefficients) and PolyQ / RatFunc over the rationals (symbolic
// recurrence construction in the index variable k).

#include <vector>
#include <string>
#include <sstream>
#include "bessellab/rational.hpp"
#include "bessellab/exceptions.hpp"

namespace bessellab {

// Polynomial with arbitrary-precision integer coefficients, ascending order.
// Invariant: the leading (last) coefficient is nonzero unless the polynomial
// is identically zero (empty coefficient vector).
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(std::initializer_list<long> coeffs) {
        for (long c : coeffs) c_.emplace_back(c);
        normalize();
    }
    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }

    static IntPoly monomial(const BigInt& coeff, unsigned long deg) {
        std::vector<BigInt> c(deg + 1, BigInt(0));
        c[deg] = coeff;
        return IntPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    BigInt operator()(const BigInt& k) const {
        BigInt acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * k + *it;
        return acc;
    }
    BigInt operator()(long k) const { return (*this)(BigInt(k)); }

    BigReal eval(const BigReal& k) const {
        BigReal acc(0L, k.prec());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * k + BigReal(*it, k.prec());
        return acc;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), BigInt(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return IntPoly(std::move(c));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), BigInt(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1, BigInt(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(c));
    }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }

    std::string to_string(const std::string& var = "k") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (long d = degree(); d >= 0; --d) {
            const BigInt& co = c_[d];
            if (co == 0) continue;
            if (!first) os << (co > 0 ? " + " : " - ");
            else if (co < 0) os << "-";
            BigInt a = abs(co);
            if (a != 1 || d == 0) os << a.get_str();
            if (d > 0) {
                if (a != 1) os << "*";
                os << var;
                if (d > 1) os << "^" << d;
            }
            first = false;
        }
        return os.str();
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<BigInt> c_;
};

// Polynomial with rational coefficients, ascending order.
class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { normalize(); }
    explicit PolyQ(const BigRational& c0) : c_{c0} { normalize(); }
    explicit PolyQ(const IntPoly& p) {
        for (const auto& c : p.coeffs()) c_.emplace_back(c);
        normalize();
    }

    static PolyQ variable() { return PolyQ(std::vector<BigRational>{BigRational(0), BigRational(1)}); }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<BigRational>& coeffs() const { return c_; }
    const BigRational& leading() const {
        if (c_.empty()) throw StructuralError("PolyQ::leading on zero polynomial");
        return c_.back();
    }

    BigRational operator()(const BigRational& k) const {
        BigRational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * k + *it;
        return acc;
    }

    // Substitute k -> k + shift.
    PolyQ shifted(long shift) const {
        PolyQ out;
        PolyQ base(std::vector<BigRational>{BigRational(shift), BigRational(1)});
        PolyQ power(BigRational(1));
        for (size_t i = 0; i < c_.size(); ++i) {
            out = out + power * PolyQ(c_[i]);
            power = power * base;
        }
        return out;
    }

    friend PolyQ operator+(const PolyQ& a, const PolyQ& b) {
        std::vector<BigRational> c(std::max(a.c_.size(), b.c_.size()), BigRational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return PolyQ(std::move(c));
    }
    friend PolyQ operator-(const PolyQ& a, const PolyQ& b) {
        std::vector<BigRational> c(std::max(a.c_.size(), b.c_.size()), BigRational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return PolyQ(std::move(c));
    }
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
        if (a.is_zero() || b.is_zero()) return PolyQ();
        std::vector<BigRational> c(a.c_.size() + b.c_.size() - 1, BigRational(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return PolyQ(std::move(c));
    }
    friend PolyQ operator*(const BigRational& s, const PolyQ& a) { return PolyQ(s) * a; }

    bool operator==(const PolyQ& o) const { return c_ == o.c_; }

    // Exact division; throws if the remainder is nonzero.
    friend PolyQ div_exact(const PolyQ& a, const PolyQ& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw StructuralError("PolyQ div_exact: nonzero remainder");
        return q;
    }

    friend std::pair<PolyQ, PolyQ> divmod(const PolyQ& a, const PolyQ& b) {
        if (b.is_zero()) throw StructuralError("PolyQ division by zero");
        PolyQ r = a;
        std::vector<BigRational> q(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1,
                                   BigRational(0));
        while (!r.is_zero() && r.degree() >= b.degree()) {
            long d = r.degree() - b.degree();
            BigRational f = r.leading() / b.leading();
            q[d] += f;
            std::vector<BigRational> sub(d + b.c_.size(), BigRational(0));
            for (size_t i = 0; i < b.c_.size(); ++i) sub[d + i] = f * b.c_[i];
            r = r - PolyQ(std::move(sub));
        }
        return {PolyQ(std::move(q)), r};
    }

    friend PolyQ gcd(PolyQ a, PolyQ b) {
        while (!b.is_zero()) {
            auto [q, r] = divmod(a, b);
            (void)q;
            a = b;
            b = r;
        }
        if (a.is_zero()) return a;
        // make monic
        BigRational inv = BigRational(1) / a.leading();
        std::vector<BigRational> c = a.c_;
        for (auto& x : c) x *= inv;
        return PolyQ(std::move(c));
    }

    // The polynomial up to a positive rational factor: denominators cleared,
    // content divided out, leading coefficient made positive.
    IntPoly primitive_integer_form() const {
        if (c_.empty()) return IntPoly();
        BigInt den(1);
        for (const auto& c : c_) den = lcm(den, BigInt(c.get_den()));
        std::vector<BigInt> ic;
        ic.reserve(c_.size());
        BigInt content(0);
        for (const auto& c : c_) {
            BigRational s = c * BigRational(den);
            ic.emplace_back(s.get_num());
            content = gcd(content, ic.back());
        }
        if (content > 1)
            for (auto& x : ic) x /= content;
        if (ic.back() < 0)
            for (auto& x : ic) x = -x;
        return IntPoly(std::move(ic));
    }

    std::string to_string(const std::string& var = "k") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (long d = degree(); d >= 0; --d) {
            const BigRational& co = c_[d];
            if (co == 0) continue;
            if (!first) os << (co > 0 ? " + " : " - ");
            else if (co < 0) os << "-";
            BigRational a = abs(co);
            if (a != 1 || d == 0) os << a.get_str();
            if (d > 0) {
                if (a != 1) os << "*";
                os << var;
                if (d > 1) os << "^" << d;
            }
            first = false;
        }
        return os.str();
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<BigRational> c_;
};

// Rational function num/den over Q(k), kept reduced (gcd 1, monic denominator).
class RatFunc {
public:
    RatFunc() : num_(), den_(BigRational(1)) {}
    explicit RatFunc(const BigRational& c) : num_(c), den_(BigRational(1)) {}
    explicit RatFunc(const PolyQ& p) : num_(p), den_(BigRational(1)) {}
    RatFunc(PolyQ num, PolyQ den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw StructuralError("RatFunc: zero denominator");
        reduce();
    }

    static RatFunc variable() { return RatFunc(PolyQ::variable()); }

    const PolyQ& num() const { return num_; }
    const PolyQ& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    BigRational operator()(const BigRational& k) const {
        BigRational d = den_(k);
        if (d == 0) throw DomainError("RatFunc evaluated at a pole");
        return num_(k) / d;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw StructuralError("RatFunc division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc operator-() const { return RatFunc(PolyQ(BigRational(-1)) * num_, den_); }

    RatFunc shifted(long shift) const { return RatFunc(num_.shifted(shift), den_.shifted(shift)); }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    std::string to_string(const std::string& var = "k") const {
        if (den_.degree() == 0 && den_.coeffs()[0] == 1) return num_.to_string(var);
        return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
    }

private:
    void reduce() {
        if (num_.is_zero()) {
            den_ = PolyQ(BigRational(1));
            return;
        }
        PolyQ g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = div_exact(num_, g);
            den_ = div_exact(den_, g);
        }
        BigRational lead = den_.leading();
        if (lead != 1) {
            BigRational inv = BigRational(1) / lead;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }
    PolyQ num_;
    PolyQ den_;
};

} // namespace bessellab

#endif

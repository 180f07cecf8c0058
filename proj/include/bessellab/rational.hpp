#ifndef BESSELLAB_RATIONAL_HPP
#define BESSELLAB_RATIONAL_HPP

// Exact integer/rational helpers shared by the recurrence algebra, the
// continued-fraction engine, and the relation finder.

#include <gmpxx.h>
#include <vector>
#include <map>
#include <mutex>
#include <string>
#include "bessellab/bigreal.hpp"

namespace bessellab {

using BigInt = mpz_class;
using BigRational = mpq_class;

// mpq_class(num, den) does not canonicalize; always construct through this.
inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigRational make_rational(long num, long den = 1) {
    return make_rational(BigInt(num), BigInt(den));
}

inline BigInt factorial(unsigned long n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    if (k > n) return BigInt(0);
    BigInt b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

// Bernoulli numbers B_0, B_1, B_2, ... with B_1 = -1/2, computed by the
// defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0 and cached.
inline BigRational bernoulli(unsigned long n) {
    static std::vector<BigRational> cache = {BigRational(1), make_rational(-1, 2)};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while (cache.size() <= n) {
        unsigned long m = cache.size();
        if (m % 2 == 1) {
            cache.push_back(BigRational(0));
            continue;
        }
        BigRational s(0);
        for (unsigned long k = 0; k < m; ++k)
            s += BigRational(binomial(m + 1, k)) * cache[k];
        cache.push_back(-s / BigRational(binomial(m + 1, m)));
    }
    return cache[n];
}

inline BigReal to_bigreal(const BigRational& q, long prec_bits) {
    return BigReal(q, prec_bits);
}

inline std::string to_string(const BigRational& q) {
    return q.get_str();
}

} // namespace bessellab

#endif

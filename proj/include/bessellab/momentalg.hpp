#ifndef BESSELLAB_MOMENTALG_HPP
#define BESSELLAB_MOMENTALG_HPP

// Exact rational algebra of the normalized Bessel moments
//
//     I_{n,j} = (1/n!) \int_0^inf u^{n+1} K0(u)^{kappa-j} K1(u)^j du.
//
// Integration by parts ties neighbouring indices together; iterating those
// ties reduces every moment with n-j even onto the short basis
// {1, \int u K0^kappa, \int u^3 K0^kappa, ...} with rational coordinates.
// Everything in this header is exact; numerical cross-checks live with the
// quadrature engine.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bessellab/exceptions.hpp"
#include "bessellab/linalg.hpp"
#include "bessellab/rational.hpp"

namespace bessellab {

// Index triple of a moment; construction validates convergence of the
// underlying integral (u^{n+1-j} near zero needs n >= j-1).
struct MomentIndex {
    long kappa;
    long n;
    long j;

    MomentIndex(long kappa_, long n_, long j_) : kappa(kappa_), n(n_), j(j_) {
        if (kappa < 1) throw DomainError("MomentIndex: kappa must be at least 1");
        if (j < 0 || j > kappa) throw DomainError("MomentIndex: j must lie in [0, kappa]");
        if (n < 0) throw DomainError("MomentIndex: n must be nonnegative");
        if (n < j - 1) throw DomainError("MomentIndex: moment diverges at the origin");
    }

    // The recurrences never mix the two classes, so this is a conserved label.
    int parity() const { return static_cast<int>(((n - j) % 2 + 2) % 2); }
};

// Rational coordinates of a moment over {1} and the odd-power moments
// \int_0^inf u^m K0(u)^kappa du with m in {1, 3, ..., kappa-3} for even kappa
// and {1, 3, ..., kappa-2} for odd kappa.  Every slot in that range is listed,
// including zero coefficients.
struct BasisDecomposition {
    long kappa = 0;
    BigRational coeff_one;
    std::vector<std::pair<long, BigRational>> coeffs;
};

// One-step map M with I_{n,.} = M . I_{n+1,.}: row j carries (n+1)/(n-j+2)
// times j at column j-1 and kappa-j at column j+1.  Rows with j > n+1 are
// formal (their moments diverge); the entries are still well defined as long
// as no denominator vanishes.
inline MatQ step_matrix(long kappa, long n) {
    if (kappa < 1) throw DomainError("step_matrix: kappa must be at least 1");
    size_t dim = static_cast<size_t>(kappa) + 1;
    MatQ m(dim, dim);
    for (long j = 0; j <= kappa; ++j) {
        if (n - j + 2 == 0)
            throw StructuralError("step_matrix: vanishing denominator in row " + std::to_string(j));
        BigRational f = make_rational(n + 1, n - j + 2);
        size_t r = static_cast<size_t>(j);
        if (j >= 1) m(r, r - 1) = f * j;
        if (j <= kappa - 1) m(r, r + 1) = f * (kappa - j);
    }
    return m;
}

// For even kappa the even-j moments at one level satisfy a single linear
// relation; this returns its coefficients over {I_{n,0}, I_{n,2}, ..., I_{n,kappa}}.
inline std::vector<BigRational> even_constraint(long kappa, long n) {
    if (kappa < 1) throw DomainError("even_constraint: kappa must be at least 1");
    if (kappa % 2 != 0) throw DomainError("even_constraint: kappa must be even");
    std::vector<BigRational> c;
    c.reserve(static_cast<size_t>(kappa / 2) + 1);
    for (long l = 0; l <= kappa / 2; ++l) {
        BigRational v = BigRational(binomial(static_cast<unsigned long>(kappa / 2),
                                             static_cast<unsigned long>(l))) *
                        (n - 2 * l + 2);
        c.push_back(l % 2 == 0 ? v : -v);
    }
    return c;
}

// Coefficients of the composed two-step map, I_{n,j} over I_{n+2,j-2},
// I_{n+2,j} and I_{n+2,j+2}.  The outer coefficients vanish on their own when
// j-2 or j+2 falls outside [0, kappa].
struct TwoStepCoeffs {
    BigRational lower;
    BigRational same;
    BigRational upper;
};

inline TwoStepCoeffs two_step_coeffs(long kappa, long n, long j) {
    if (kappa < 1) throw DomainError("two_step_coeffs: kappa must be at least 1");
    long d2 = n - j + 2;
    long d4 = n - j + 4;
    if (d2 == 0 || d4 == 0)
        throw StructuralError("two_step_coeffs: vanishing denominator at n=" + std::to_string(n) +
                              ", j=" + std::to_string(j));
    BigRational base((n + 1) * (n + 2));
    TwoStepCoeffs c;
    c.lower = base * ((j - 1) * j) / BigRational(d2 * d4);
    c.same = base / d2 *
             (make_rational((j + 1) * (kappa - j), d2) + make_rational(j * (kappa - j + 1), d4));
    c.upper = base * ((kappa - j - 1) * (kappa - j)) / BigRational(d2 * d2);
    return c;
}

namespace detail {

// Even-j components at an even level: {I_{n,0}, I_{n,2}, ...} up to kappa for
// even kappa, kappa-1 for odd.
inline size_t even_slots(long kappa) { return static_cast<size_t>(kappa / 2) + 1; }

// Two-step map restricted to that sub-vector, E_n = S . E_{n+2}.  Only valid
// at levels where every row's denominators survive, which holds from the seed
// level upward.
inline MatQ two_step_even(long kappa, long n) {
    size_t s = even_slots(kappa);
    MatQ m(s, s);
    for (size_t r = 0; r < s; ++r) {
        TwoStepCoeffs c = two_step_coeffs(kappa, n, 2 * static_cast<long>(r));
        if (r >= 1) m(r, r - 1) = c.lower;
        m(r, r) = c.same;
        if (r + 1 < s) m(r, r + 1) = c.upper;
    }
    return m;
}

// Seed data: coordinates of the even-j components at the seed level L (kappa
// for even kappa, kappa-1 for odd) over {1, I_{L,0}, I_{L,2}, ..., I_{L,2t-2}}.
// The first column is the rational part.  The top components are pinned by
// I_{kappa-1,kappa-1} = 1/kappa! together with, for even kappa, the linear
// constraint at level kappa.
struct SeedMap {
    long level = 0;
    size_t free_slots = 0;
    MatQ rows;
};

inline SeedMap build_seed_map(long kappa) {
    SeedMap sm;
    sm.level = (kappa % 2 == 0) ? kappa : kappa - 1;
    size_t s = even_slots(kappa);
    size_t t = (kappa % 2 == 0) ? s - 2 : s - 1;
    sm.free_slots = t;
    sm.rows = MatQ(s, 1 + t);
    for (size_t r = 0; r < t; ++r) sm.rows(r, 1 + r) = 1;
    BigRational seed = make_rational(BigInt(1), factorial(static_cast<unsigned long>(kappa)));
    if (kappa % 2 == 1) {
        // I_{kappa-1,kappa-1} is the top even slot itself.
        sm.rows(s - 1, 0) = seed;
    } else {
        // Unknowns (I_{kappa,kappa-2}, I_{kappa,kappa}); one equation is the
        // constraint at level kappa, the other the one-step expansion
        // 2 I_{kappa-1,kappa-1} = kappa [(kappa-1) I_{kappa,kappa-2} + I_{kappa,kappa}].
        std::vector<BigRational> c = even_constraint(kappa, kappa);
        MatQ A(2, 2), B(2, 1 + t);
        A(0, 0) = c[s - 2];
        A(0, 1) = c[s - 1];
        A(1, 0) = BigRational(kappa * (kappa - 1));
        A(1, 1) = kappa;
        for (size_t l = 0; l < t; ++l) B(0, 1 + l) = -c[l];
        B(1, 0) = 2 * seed;
        MatQ X = solve(A, B);
        for (size_t col = 0; col <= t; ++col) {
            sm.rows(s - 2, col) = X(0, col);
            sm.rows(s - 1, col) = X(1, col);
        }
    }
    return sm;
}

// Coordinates of every even-j component at even level n over the seed basis.
// Below the seed level the map follows by climbing; above it by inverting the
// climb, with the level-n constraint restoring invertibility for even kappa.
inline MatQ level_map(long kappa, long n, const SeedMap& sm) {
    size_t s = even_slots(kappa);
    if (n == sm.level) return sm.rows;
    if (n > sm.level) {
        MatQ P = two_step_even(kappa, sm.level);
        for (long v = sm.level + 2; v < n; v += 2) P = P * two_step_even(kappa, v);
        if (kappa % 2 == 1) return solve(P, sm.rows);
        std::vector<BigRational> c = even_constraint(kappa, n);
        MatQ A(s + 1, s), B(s + 1, 1 + sm.free_slots);
        for (size_t r = 0; r < s; ++r)
            for (size_t q = 0; q < s; ++q) A(r, q) = P(r, q);
        for (size_t q = 0; q < s; ++q) A(s, q) = c[q];
        for (size_t r = 0; r < s; ++r)
            for (size_t col = 0; col <= sm.free_slots; ++col) B(r, col) = sm.rows(r, col);
        return solve_overdetermined_consistent(A, B);
    }
    throw StructuralError("level_map: level below the seed is handled by climbing");
}

// Row vector of I_{n,j} (n-j even) over the seed basis {1, I_{L,0}, ...}.
inline std::vector<BigRational> seed_coords(long kappa, long n, long j, const SeedMap& sm) {
    size_t s = even_slots(kappa);
    std::vector<BigRational> w(s, BigRational(0));
    long level = n;
    if (n % 2 != 0) {
        // One application of the one-step map lands on even indices.
        BigRational f = make_rational(n + 1, n - j + 2);
        if (j >= 1) w[static_cast<size_t>((j - 1) / 2)] += f * j;
        if (j <= kappa - 1) w[static_cast<size_t>((j + 1) / 2)] += f * (kappa - j);
        level = n + 1;
    } else {
        w[static_cast<size_t>(j / 2)] = 1;
    }
    // Climb toward the seed level term by term; rows whose weight is zero are
    // never expanded, so divergent formal components stay untouched.
    while (level < sm.level) {
        std::vector<BigRational> next(s, BigRational(0));
        for (size_t r = 0; r < s; ++r) {
            if (w[r] == 0) continue;
            TwoStepCoeffs c = two_step_coeffs(kappa, level, 2 * static_cast<long>(r));
            if (r >= 1) next[r - 1] += w[r] * c.lower;
            next[r] += w[r] * c.same;
            if (r + 1 < s) next[r + 1] += w[r] * c.upper;
        }
        w.swap(next);
        level += 2;
    }
    MatQ rows = level_map(kappa, level, sm);
    std::vector<BigRational> out(1 + sm.free_slots, BigRational(0));
    for (size_t r = 0; r < s; ++r) {
        if (w[r] == 0) continue;
        for (size_t col = 0; col <= sm.free_slots; ++col) out[col] += w[r] * rows(r, col);
    }
    return out;
}

} // namespace detail

// Exact coordinates of I_{n,j} over {1, \int u K0^kappa, \int u^3 K0^kappa, ...}.
// Only the sub-family with n-j even is reduced; the odd class has its own
// parallel algebra that this laboratory does not implement.
inline BasisDecomposition decompose(const MomentIndex& idx) {
    if (idx.parity() != 0)
        throw UnsupportedSubfamilyError("decompose: only the even n-j sub-family is implemented");
    detail::SeedMap sm = detail::build_seed_map(idx.kappa);
    size_t t = sm.free_slots;
    std::vector<BigRational> v = detail::seed_coords(idx.kappa, idx.n, idx.j, sm);

    // Express the seed moments back through the basis moments I_{2i,0}: climb
    // each basis element to the seed level and invert the square relation.
    MatQ G(t, t);
    std::vector<BigRational> g(t, BigRational(0));
    for (size_t i = 0; i < t; ++i) {
        std::vector<BigRational> u = detail::seed_coords(idx.kappa, 2 * static_cast<long>(i), 0, sm);
        g[i] = u[0];
        for (size_t k = 0; k < t; ++k) G(i, k) = u[1 + k];
    }
    MatQ Ginv = inverse(G);

    std::vector<BigRational> row(t, BigRational(0));
    for (size_t i = 0; i < t; ++i)
        for (size_t k = 0; k < t; ++k) row[i] += v[1 + k] * Ginv(k, i);

    BasisDecomposition out;
    out.kappa = idx.kappa;
    out.coeff_one = v[0];
    for (size_t i = 0; i < t; ++i) out.coeff_one -= row[i] * g[i];
    for (size_t i = 0; i < t; ++i) {
        // Basis element m = 2i+1 is \int u^m K0^kappa = (2i)! I_{2i,0}.
        BigRational coeff = row[i] / BigRational(factorial(2 * static_cast<unsigned long>(i)));
        out.coeffs.emplace_back(2 * static_cast<long>(i) + 1, coeff);
    }
    return out;
}

// n -> infinity limit of the two-step map: integer entries (j-1)j,
// 2j(kappa-j)+kappa and (kappa-j-1)(kappa-j) on three diagonals.
inline MatQ asymptotic_matrix(long kappa) {
    if (kappa < 1) throw DomainError("asymptotic_matrix: kappa must be at least 1");
    size_t dim = static_cast<size_t>(kappa) + 1;
    MatQ m(dim, dim);
    for (long j = 0; j <= kappa; ++j) {
        size_t r = static_cast<size_t>(j);
        if (j >= 2) m(r, r - 2) = BigRational((j - 1) * j);
        m(r, r) = BigRational(2 * j * (kappa - j) + kappa);
        if (j + 2 <= kappa) m(r, r + 2) = BigRational((kappa - j - 1) * (kappa - j));
    }
    return m;
}

// Spectrum of the limiting map on the even parity class, with the even-kappa
// degenerate direction removed through the linear constraint.  The eigenvalues
// are certified by exact singularity checks, and the certificate records the
// all-ones eigenvector carrying the top eigenvalue kappa^2.
struct AsymptoticSpectrum {
    std::vector<long> eigenvalues;
    std::vector<BigRational> certificate;
};

inline AsymptoticSpectrum asymptotic_eigenvalues(long kappa) {
    if (kappa < 1) throw DomainError("asymptotic_eigenvalues: kappa must be at least 1");
    size_t s = detail::even_slots(kappa);

    // Even-j restriction of the limiting map.
    MatQ B(s, s);
    for (size_t r = 0; r < s; ++r) {
        long j = 2 * static_cast<long>(r);
        if (r >= 1) B(r, r - 1) = BigRational((j - 1) * j);
        B(r, r) = BigRational(2 * j * (kappa - j) + kappa);
        if (r + 1 < s) B(r, r + 1) = BigRational((kappa - j - 1) * (kappa - j));
    }
    if (kappa % 2 == 0) {
        // The constraint coefficients grow like (-1)^l C(kappa/2, l) n; use
        // them to eliminate the top slot and drop one dimension.
        size_t top = s - 1;
        std::vector<BigRational> c;
        for (long l = 0; l <= kappa / 2; ++l) {
            BigRational v(binomial(static_cast<unsigned long>(kappa / 2), static_cast<unsigned long>(l)));
            c.push_back(l % 2 == 0 ? v : -v);
        }
        MatQ R(top, top);
        for (size_t r = 0; r < top; ++r)
            for (size_t q = 0; q < top; ++q) R(r, q) = B(r, q) - B(r, top) * c[q] / c[top];
        B = R;
        s = top;
    }

    AsymptoticSpectrum out;
    for (long m = kappa; m >= 1; m -= 2) out.eigenvalues.push_back(m * m);
    if (out.eigenvalues.size() != s)
        throw StructuralError("asymptotic_eigenvalues: eigenvalue count mismatch");
    for (long lambda : out.eigenvalues) {
        MatQ shifted = B;
        for (size_t r = 0; r < s; ++r) shifted(r, r) -= lambda;
        if (det(shifted) != 0)
            throw StructuralError("asymptotic_eigenvalues: claimed eigenvalue is not one");
    }

    // The full map sends the all-ones vector to kappa^2 times itself.
    MatQ full = asymptotic_matrix(kappa);
    out.certificate.assign(static_cast<size_t>(kappa) + 1, BigRational(1));
    std::vector<BigRational> image = full.apply(out.certificate);
    for (const BigRational& y : image)
        if (y != BigRational(kappa * kappa))
            throw StructuralError("asymptotic_eigenvalues: all-ones certificate failed");
    return out;
}

} // namespace bessellab

#endif

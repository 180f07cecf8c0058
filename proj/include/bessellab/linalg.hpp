#ifndef BESSELLAB_LINALG_HPP
#define BESSELLAB_LINALG_HPP

// Exact dense linear algebra over the rationals: enough to invert the small
// moment-reduction systems and to solve overdetermined but consistent systems
// that arise when a constraint row is appended.

#include <vector>
#include "bessellab/rational.hpp"
#include "bessellab/exceptions.hpp"

namespace bessellab {

class MatQ {
public:
    MatQ() : rows_(0), cols_(0) {}
    MatQ(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, BigRational(0)) {}

    static MatQ identity(size_t n) {
        MatQ m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    BigRational& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const BigRational& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend MatQ operator*(const MatQ& a, const MatQ& b) {
        if (a.cols_ != b.rows_) throw StructuralError("MatQ multiply: shape mismatch");
        MatQ c(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    std::vector<BigRational> apply(const std::vector<BigRational>& x) const {
        if (x.size() != cols_) throw StructuralError("MatQ apply: shape mismatch");
        std::vector<BigRational> y(rows_, BigRational(0));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                y[i] += (*this)(i, j) * x[j];
        return y;
    }

    bool operator==(const MatQ& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    size_t rows_, cols_;
    std::vector<BigRational> a_;
};

// Determinant by fraction-free (Bareiss) elimination on an integer-scaled copy.
inline BigRational det(const MatQ& m) {
    if (m.rows() != m.cols()) throw StructuralError("det: matrix not square");
    size_t n = m.rows();
    if (n == 0) return BigRational(1);

    // scale each row to integers, track the product of scales
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
    BigInt scale(1);
    for (size_t i = 0; i < n; ++i) {
        BigInt den(1);
        for (size_t j = 0; j < n; ++j) den = lcm(den, BigInt(m(i, j).get_den()));
        for (size_t j = 0; j < n; ++j) {
            BigRational s = m(i, j) * BigRational(den);
            a[i][j] = BigInt(s.get_num());
        }
        scale *= den;
    }

    BigInt divPrev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return BigRational(0);
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / divPrev;
        divPrev = a[k][k];
    }
    BigRational d = make_rational(a[n - 1][n - 1], scale);
    return sign > 0 ? d : -d;
}

// Gauss-Jordan solve A X = B for square nonsingular A; B may have many columns.
inline MatQ solve(const MatQ& A, const MatQ& B) {
    if (A.rows() != A.cols()) throw StructuralError("solve: matrix not square");
    if (A.rows() != B.rows()) throw StructuralError("solve: shape mismatch");
    size_t n = A.rows(), m = B.cols();
    MatQ W(n, n + m);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) W(i, j) = A(i, j);
        for (size_t j = 0; j < m; ++j) W(i, n + j) = B(i, j);
    }
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        while (p < n && W(p, k) == 0) ++p;
        if (p == n) throw StructuralError("solve: singular matrix");
        if (p != k)
            for (size_t j = 0; j < n + m; ++j) std::swap(W(k, j), W(p, j));
        BigRational inv = BigRational(1) / W(k, k);
        for (size_t j = k; j < n + m; ++j) W(k, j) *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == k || W(i, k) == 0) continue;
            BigRational f = W(i, k);
            for (size_t j = k; j < n + m; ++j) W(i, j) -= f * W(k, j);
        }
    }
    MatQ X(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) X(i, j) = W(i, n + j);
    return X;
}

inline MatQ inverse(const MatQ& A) { return solve(A, MatQ::identity(A.rows())); }

inline size_t rank(const MatQ& m) {
    MatQ W = m;
    size_t r = m.rows(), c = m.cols(), rk = 0;
    for (size_t k = 0; k < c && rk < r; ++k) {
        size_t p = rk;
        while (p < r && W(p, k) == 0) ++p;
        if (p == r) continue;
        if (p != rk)
            for (size_t j = 0; j < c; ++j) std::swap(W(rk, j), W(p, j));
        for (size_t i = rk + 1; i < r; ++i) {
            if (W(i, k) == 0) continue;
            BigRational f = W(i, k) / W(rk, k);
            for (size_t j = k; j < c; ++j) W(i, j) -= f * W(rk, j);
        }
        ++rk;
    }
    return rk;
}

// Solve A X = B where A has more rows than columns but the system is known to
// be consistent (extra rows are exact consequences of the others). Row-reduces
// the full system and checks that every surplus row vanishes identically;
// throws StructuralError on inconsistency or rank deficiency.
inline MatQ solve_overdetermined_consistent(const MatQ& A, const MatQ& B) {
    if (A.rows() < A.cols()) throw StructuralError("solve_overdetermined: too few rows");
    if (A.rows() != B.rows()) throw StructuralError("solve_overdetermined: shape mismatch");
    size_t r = A.rows(), n = A.cols(), m = B.cols();
    MatQ W(r, n + m);
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < n; ++j) W(i, j) = A(i, j);
        for (size_t j = 0; j < m; ++j) W(i, n + j) = B(i, j);
    }
    size_t rank = 0;
    for (size_t k = 0; k < n; ++k) {
        size_t p = rank;
        while (p < r && W(p, k) == 0) ++p;
        if (p == r) continue;
        if (p != rank)
            for (size_t j = 0; j < n + m; ++j) std::swap(W(rank, j), W(p, j));
        BigRational inv = BigRational(1) / W(rank, k);
        for (size_t j = k; j < n + m; ++j) W(rank, j) *= inv;
        for (size_t i = 0; i < r; ++i) {
            if (i == rank || W(i, k) == 0) continue;
            BigRational f = W(i, k);
            for (size_t j = k; j < n + m; ++j) W(i, j) -= f * W(rank, j);
        }
        ++rank;
    }
    if (rank < n) throw StructuralError("solve_overdetermined: rank-deficient system");
    for (size_t i = rank; i < r; ++i)
        for (size_t j = 0; j < n + m; ++j)
            if (W(i, j) != 0)
                throw StructuralError("solve_overdetermined: inconsistent system");
    MatQ X(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) X(i, j) = W(i, n + j);
    return X;
}

} // namespace bessellab

#endif

#pragma once

// Exact integer-matrix kernel: Smith normal form with unimodular
// certificates, determinants, unimodular inverses, and reduced fractions.
// Everything here is arbitrary-precision; no floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hmstori {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense square matrix over arbitrary-precision integers, row-major.
class IntMat {
public:
    IntMat() = default;
    explicit IntMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        if (n < 0) throw std::invalid_argument("IntMat: negative size");
    }

    static IntMat identity(int n) {
        IntMat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int n() const { return n_; }

    Int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Int& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    bool operator==(const IntMat&) const = default;

    IntMat transpose() const {
        IntMat t(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend IntMat operator*(const IntMat& x, const IntMat& y) {
        if (x.n_ != y.n_) throw std::invalid_argument("IntMat: size mismatch in product");
        IntMat z(x.n_);
        for (int i = 0; i < x.n_; ++i)
            for (int k = 0; k < x.n_; ++k) {
                const Int& v = x(i, k);
                if (v == 0) continue;
                for (int j = 0; j < x.n_; ++j) z(i, j) += v * y(k, j);
            }
        return z;
    }

private:
    int n_ = 0;
    std::vector<Int> a_;
};

/// Fraction-free determinant (Bareiss).
inline Int exact_det(const IntMat& m) {
    const int n = m.n();
    if (n == 0) return 1;
    IntMat w = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (w(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w(k, j), w(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w(i, j) = (w(i, j) * w(k, k) - w(i, k) * w(k, j)) / prev;
        prev = w(k, k);
    }
    return sign > 0 ? w(n - 1, n - 1) : -w(n - 1, n - 1);
}

/// Exact inverse of a matrix with det = +-1. The inverse is again integral.
inline IntMat unimodular_inverse(const IntMat& m) {
    Int d = exact_det(m);
    if (d != 1 && d != -1) throw std::invalid_argument("unimodular_inverse: determinant is not +-1");
    const int n = m.n();
    // Gauss-Jordan over the rationals; the result must come out integral.
    std::vector<std::vector<Rational>> w(n, std::vector<Rational>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w[i][j] = Rational(m(i, j));
        w[i][n + i] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (w[i][c] != 0) { piv = i; break; }
        if (piv < 0) throw std::logic_error("unimodular_inverse: singular despite unit determinant");
        std::swap(w[c], w[piv]);
        Rational pv = w[c][c];
        for (int j = 0; j < 2 * n; ++j) w[c][j] /= pv;
        for (int i = 0; i < n; ++i) {
            if (i == c || w[i][c] == 0) continue;
            Rational f = w[i][c];
            for (int j = 0; j < 2 * n; ++j) w[i][j] -= f * w[c][j];
        }
    }
    IntMat inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rational& v = w[i][n + j];
            if (boost::multiprecision::denominator(v) != 1)
                throw std::logic_error("unimodular_inverse: non-integral inverse entry");
            inv(i, j) = boost::multiprecision::numerator(v);
        }
    return inv;
}

/// left * input * right = diag(diag), with |det left| = |det right| = 1,
/// diag nonnegative, divisibility chain d_i | d_{i+1}, zeros trailing.
struct SnfCertificate {
    IntMat left;
    std::vector<Int> diag;
    IntMat right;
};

/// Smith normal form of a square integer matrix, with unimodular
/// certificates. Total on square matrices; deterministic.
inline SnfCertificate snf(const IntMat& a) {
    const int n = a.n();
    if (n < 1) throw std::invalid_argument("snf: matrix must have n >= 1");
    IntMat m = a;
    IntMat left = IntMat::identity(n);
    IntMat right = IntMat::identity(n);

    auto row_swap = [&](int i, int j) {
        for (int c = 0; c < n; ++c) {
            std::swap(m(i, c), m(j, c));
            std::swap(left(i, c), left(j, c));
        }
    };
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < n; ++r) {
            std::swap(m(r, i), m(r, j));
            std::swap(right(r, i), right(r, j));
        }
    };
    auto row_negate = [&](int i) {
        for (int c = 0; c < n; ++c) {
            m(i, c) = -m(i, c);
            left(i, c) = -left(i, c);
        }
    };
    auto row_addmul = [&](int dst, int src, const Int& f) {
        for (int c = 0; c < n; ++c) {
            m(dst, c) += f * m(src, c);
            left(dst, c) += f * left(src, c);
        }
    };
    auto col_addmul = [&](int dst, int src, const Int& f) {
        for (int r = 0; r < n; ++r) {
            m(r, dst) += f * m(r, src);
            right(r, dst) += f * right(r, src);
        }
    };

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            int pi = -1, pj = -1;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    if (m(i, j) == 0) continue;
                    if (pi < 0 || boost::multiprecision::abs(m(i, j)) <
                                      boost::multiprecision::abs(m(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) { t = n; break; }  // trailing block is zero
            if (pi != t) row_swap(t, pi);
            if (pj != t) col_swap(t, pj);
            if (m(t, t) < 0) row_negate(t);

            bool reduced = true;
            for (int i = t + 1; i < n; ++i) {
                if (m(i, t) == 0) continue;
                Int q = m(i, t) / m(t, t);
                if (q != 0) row_addmul(i, t, -q);
                if (m(i, t) != 0) reduced = false;
            }
            for (int j = t + 1; j < n; ++j) {
                if (m(t, j) == 0) continue;
                Int q = m(t, j) / m(t, t);
                if (q != 0) col_addmul(j, t, -q);
                if (m(t, j) != 0) reduced = false;
            }
            if (!reduced) continue;

            // the pivot must divide every remaining entry
            int bi = -1;
            for (int i = t + 1; i < n && bi < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (m(i, j) % m(t, t) != 0) { bi = i; break; }
            if (bi < 0) break;
            row_addmul(t, bi, 1);
        }
        if (t >= n) break;
    }

    SnfCertificate cert;
    cert.left = std::move(left);
    cert.right = std::move(right);
    cert.diag.resize(n);
    for (int i = 0; i < n; ++i) cert.diag[i] = m(i, i);
    return cert;
}

/// num/den in lowest terms, denominator >= 1.
struct ReducedFraction {
    Int num;
    Int den;

    bool operator==(const ReducedFraction&) const = default;
};

inline ReducedFraction reduce_fraction(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("reduce_fraction: zero denominator");
    if (num == 0) return {0, 1};
    Int g = boost::multiprecision::gcd(boost::multiprecision::abs(num),
                                       boost::multiprecision::abs(den));
    Int nn = num / g;
    Int dd = den / g;
    if (dd < 0) { nn = -nn; dd = -dd; }
    return {nn, dd};
}

}  // namespace hmstori

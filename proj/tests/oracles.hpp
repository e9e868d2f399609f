#pragma once

// Test-side oracles and generators. Everything here is independent of the
// library code paths it is used to check: determinants by cofactor
// expansion, elementary divisors by gcds of minors, lattice membership by
// exact rational arithmetic.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "hmstori/exact.hpp"
#include "hmstori/torus.hpp"

namespace oracles {

using hmstori::Int;
using hmstori::Rational;

// ---- exact integer oracles ----

inline Int cofactor_det(const std::vector<std::vector<Int>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    Int acc = 0;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<Int>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Int> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        acc += sign * m[0][c] * cofactor_det(minor);
        sign = -sign;
    }
    return acc;
}

// all k-subsets of {0..n-1}
inline std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    for (;;) {
        out.push_back(cur);
        int pos = k - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++cur[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i) - 1] + 1;
    }
    return out;
}

/// Elementary divisors from gcds of k x k minors: with g_k the gcd of all
/// k-minors (g_0 = 1), d_k = g_k / g_{k-1} while g_k != 0, then zeros.
inline std::vector<Int> minor_gcd_divisors(const hmstori::IntMat& a) {
    const int n = a.n();
    std::vector<Int> g(static_cast<std::size_t>(n) + 1);
    g[0] = 1;
    for (int k = 1; k <= n; ++k) {
        Int acc = 0;
        for (const auto& rows : subsets(n, k))
            for (const auto& cols : subsets(n, k)) {
                std::vector<std::vector<Int>> sub;
                for (int i : rows) {
                    std::vector<Int> row;
                    for (int j : cols) row.push_back(a(i, j));
                    sub.push_back(std::move(row));
                }
                acc = boost::multiprecision::gcd(acc, boost::multiprecision::abs(cofactor_det(sub)));
            }
        g[static_cast<std::size_t>(k)] = acc;
    }
    std::vector<Int> d(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        if (g[static_cast<std::size_t>(k)] == 0)
            d[static_cast<std::size_t>(k) - 1] = 0;
        else
            d[static_cast<std::size_t>(k) - 1] =
                g[static_cast<std::size_t>(k)] / g[static_cast<std::size_t>(k) - 1];
    }
    return d;
}

/// Exact membership of a rational vector in Z/d_1 x ... x Z/d_n.
inline bool in_lattice_exact(const std::vector<Rational>& m, const std::vector<long>& dens) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        Rational scaled = m[i] * dens[i];
        if (boost::multiprecision::denominator(scaled) != 1) return false;
    }
    return true;
}

// ---- random generators (all deterministic under a caller-provided rng) ----

inline hmstori::IntMat random_intmat(std::mt19937& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    hmstori::IntMat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = d(rng);
    return m;
}

inline Eigen::MatrixXi random_int_matrix(std::mt19937& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    Eigen::MatrixXi m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = d(rng);
    return m;
}

inline Eigen::MatrixXi random_symmetric_int(std::mt19937& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    Eigen::MatrixXi m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
    return m;
}

/// Product of random elementary row operations; entries stay small.
inline hmstori::IntMat random_unimodular(std::mt19937& rng, int n, int ops = 10) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> kind(0, 3);
    hmstori::IntMat m = hmstori::IntMat::identity(n);
    for (int step = 0; step < ops; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int op = kind(rng);
        if (op == 0) {
            for (int c = 0; c < n; ++c) std::swap(m(i, c), m(j, c));
        } else if (op == 1) {
            for (int c = 0; c < n; ++c) m(i, c) = -m(i, c);
        } else {
            int f = coef(rng);
            hmstori::IntMat trial = m;
            bool small = true;
            for (int c = 0; c < n; ++c) {
                trial(i, c) += f * trial(j, c);
                if (boost::multiprecision::abs(trial(i, c)) > 30) small = false;
            }
            if (small) m = trial;
        }
    }
    return m;
}

inline Eigen::MatrixXi to_eigen_i(const hmstori::IntMat& m) {
    Eigen::MatrixXi out(m.n(), m.n());
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) out(i, j) = static_cast<int>(m(i, j));
    return out;
}

/// Random valid torus: Im T = M M^t + I/2, Re T arbitrary in [-1, 1].
inline hmstori::TorusData random_torus(std::mt19937& rng, int n, double tol = 1e-9) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd x(n, n), w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            x(i, j) = u(rng);
            w(i, j) = u(rng);
        }
    Eigen::MatrixXd y = w * w.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXcd t = x.cast<std::complex<double>>() +
                         std::complex<double>(0.0, 1.0) * y.cast<std::complex<double>>();
    return hmstori::make_torus(t, tol);
}

/// Instances with AT = (AT)^t by construction: A and T are integer/complex
/// polynomials in one random symmetric integer matrix.
struct HoloInstance {
    Eigen::MatrixXi A;
    hmstori::TorusData torus;
};

inline HoloInstance random_commuting_instance(std::mt19937& rng, int n, double tol = 1e-9) {
    std::uniform_int_distribution<int> small(-2, 2);
    std::uniform_int_distribution<int> coefa(-3, 3);
    std::uniform_int_distribution<int> coefc(-1, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ua(2.0, 3.0);
    Eigen::MatrixXi j = random_symmetric_int(rng, n, -2, 2);
    (void)small;
    Eigen::MatrixXi j2 = j * j;
    Eigen::MatrixXi a = coefa(rng) * Eigen::MatrixXi::Identity(n, n) + coefa(rng) * j + coefc(rng) * j2;

    auto cplx = [&](double re, double im) { return std::complex<double>(re, im); };
    std::complex<double> alpha = cplx(u(rng), ua(rng));
    std::complex<double> beta = cplx(0.2 * u(rng), 0.1 * u(rng));
    std::complex<double> gamma = cplx(0.05 * u(rng), 0.02 * u(rng));
    Eigen::MatrixXcd t = alpha * Eigen::MatrixXcd::Identity(n, n) +
                         beta * j.cast<std::complex<double>>() +
                         gamma * j2.cast<std::complex<double>>();
    return {a, hmstori::make_torus(t, tol)};
}

// ---- numeric comparison helpers ----

inline bool mat_close(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double eps = 1e-12) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a - b).cwiseAbs().maxCoeff() <= eps;
}

inline bool vec_close(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double eps = 1e-12) {
    if (a.size() != b.size()) return false;
    return (a - b).cwiseAbs().maxCoeff() <= eps;
}

/// Distance of two points of [0, 2pi)^n modulo the 2pi lattice.
inline double torus_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double d = std::abs(a(i) - b(i));
        d = std::min(d, hmstori::two_pi - d);
        worst = std::max(worst, d);
    }
    return worst;
}

/// Multiset equality of point lists modulo 2pi.
inline bool same_point_set(std::vector<Eigen::VectorXd> xs, std::vector<Eigen::VectorXd> ys,
                           double eps = 1e-9) {
    if (xs.size() != ys.size()) return false;
    std::vector<bool> used(ys.size(), false);
    for (const auto& x : xs) {
        bool found = false;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (used[i]) continue;
            if (torus_dist(x, ys[i]) <= eps) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace oracles

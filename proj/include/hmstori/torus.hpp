#pragma once

// Period-matrix data of the mirror pair. The complex torus has period
// matrix T (coordinates z = x + Ty, lattice 2pi(Z^n + T Z^n)); its mirror
// carries the complexified symplectic form with
//   omega = Im(-T^{-1})^t,  B = Re(-T^{-1})^t.
// Also the T-adapted decomposition v = alpha + T^t beta and the membership
// test for the divisor lattice Z/r_1' x ... x Z/r_s' x Z x ... x Z.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "hmstori/rank.hpp"

namespace hmstori {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct TorusData {
    Eigen::MatrixXcd T;
    Eigen::MatrixXd omega;
    Eigen::MatrixXd bfield;
    double tol = 1e-9;

    int dim() const { return static_cast<int>(T.rows()); }
};

/// Builds TorusData from a period matrix. Rejects T whose imaginary part is
/// not symmetric positive definite within tol, and |det T| <= tol.
inline TorusData make_torus(const Eigen::MatrixXcd& T, double tol = 1e-9) {
    if (T.rows() != T.cols() || T.rows() < 1)
        throw std::invalid_argument("make_torus: T must be square, n >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("make_torus: tol must be positive");

    Eigen::MatrixXd imT = T.imag();
    double asym = (imT - imT.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol) throw std::invalid_argument("make_torus: Im T is not symmetric within tol");
    Eigen::MatrixXd sym = 0.5 * (imT + imT.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= tol)
        throw std::invalid_argument("make_torus: Im T is not positive definite within tol");
    if (std::abs(T.determinant()) <= tol)
        throw std::invalid_argument("make_torus: T is singular (|det T| <= tol)");

    TorusData td;
    td.T = T;
    Eigen::MatrixXcd mti = (-T.inverse()).transpose();
    td.omega = mti.imag();
    td.bfield = mti.real();
    td.tol = tol;
    return td;
}

/// Unique splitting v = alpha + T^t beta with alpha, beta real. Uses
/// beta = (Im T^t)^{-1} Im v, alpha = Re v - Re(T^t) beta.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> t_decompose(const Eigen::VectorXcd& v,
                                                               const TorusData& torus) {
    if (v.size() != torus.dim()) throw std::invalid_argument("t_decompose: dimension mismatch");
    Eigen::MatrixXd imTt = torus.T.transpose().imag();
    Eigen::VectorXd beta = imTt.fullPivLu().solve(v.imag());
    Eigen::VectorXd alpha = v.real() - torus.T.transpose().real() * beta;
    return {std::move(alpha), std::move(beta)};
}

/// True iff m_i lies in Z/r_i' for i < s and in Z beyond, each tested as
/// |r_i' m_i - round(r_i' m_i)| <= tol.
inline bool in_divisor_lattice(const Eigen::VectorXd& m, const RankData& rank, double tol) {
    if (m.size() != rank.dim()) throw std::invalid_argument("in_divisor_lattice: dimension mismatch");
    for (int i = 0; i < m.size(); ++i) {
        double scaled = m(i) * static_cast<double>(rank.divisor_den(i));
        if (std::abs(scaled - std::round(scaled)) > tol) return false;
    }
    return true;
}

}  // namespace hmstori

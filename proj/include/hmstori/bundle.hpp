#pragma once

// Factor data of the simple projectively flat bundles E_(r,A,r',U,p,q):
// transition unitaries and their cocycle condition, determinant phases,
// holomorphicity, curvature, the standard clock-and-shift unitary set, the
// commutant-dimension proxy for simplicity, tensoring by flat line bundles,
// the primitive-form reduction, and the isomorphism classifier.
//
// A unitary set either lives in the ambient coordinates of A itself, or in
// the divisor coordinates where A has been brought to its diagonal form
// left*A*right. The standard set is constructed in divisor coordinates; its
// determinant phases transform back to ambient ones by left^{-1} (theta)
// and (right^t)^{-1} (xi).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hmstori/rank.hpp"
#include "hmstori/torus.hpp"

namespace hmstori {

/// Phase of z reduced to the principal branch [0, 2pi).
inline double principal_phase(std::complex<double> z) {
    double a = std::arg(z);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return a;
}

inline double inf_norm(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-9) {
    if (m.rows() != m.cols()) return false;
    return inf_norm(m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())) <= tol;
}

struct UnitarySet {
    std::vector<Eigen::MatrixXcd> V;
    std::vector<Eigen::MatrixXcd> U;
    Eigen::VectorXd xi;     // principal phases of det V_j
    Eigen::VectorXd theta;  // principal phases of det U_k

    int dim() const { return static_cast<int>(V.size()); }
    long order() const { return V.empty() ? 0 : static_cast<long>(V.front().rows()); }
};

/// Recomputes the determinant phases of a set. Rejects matrices whose
/// determinant modulus strays from 1 beyond tol.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> det_phases(const UnitarySet& uset,
                                                              double tol = 1e-9) {
    const int n = uset.dim();
    if (static_cast<int>(uset.U.size()) != n)
        throw std::invalid_argument("det_phases: V/U count mismatch");
    Eigen::VectorXd xi(n), theta(n);
    for (int j = 0; j < n; ++j) {
        std::complex<double> dv = uset.V[static_cast<std::size_t>(j)].determinant();
        std::complex<double> du = uset.U[static_cast<std::size_t>(j)].determinant();
        if (std::abs(std::abs(dv) - 1.0) > tol || std::abs(std::abs(du) - 1.0) > tol)
            throw std::invalid_argument("det_phases: non-unitary matrix (|det| != 1)");
        xi(j) = principal_phase(dv);
        theta(j) = principal_phase(du);
    }
    return {std::move(xi), std::move(theta)};
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace detail {

// identity on every divisor slot except `slot`, which carries m
inline Eigen::MatrixXcd kron_slot(const RankData& rank, int slot, const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 0; i < rank.s; ++i) {
        long ri = rank.divisor_den(i);
        out = kron(out, i == slot ? m : Eigen::MatrixXcd::Identity(ri, ri));
    }
    return out;
}

}  // namespace detail

/// The clock-and-shift set of the simplicity construction, in divisor
/// coordinates: slot i < s carries the cyclic shift in V_i and the clock
/// power diag(1, z, ..., z^{r_i'-1})^{-a_i'} in U_i, z = e^{2 pi i / r_i'};
/// slots beyond s are identities.
inline UnitarySet standard_unitary_set(const RankData& rank) {
    const int n = rank.dim();
    const long rp = rank.rprime;
    UnitarySet us;
    us.V.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Identity(rp, rp));
    us.U.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Identity(rp, rp));
    for (int i = 0; i < rank.s; ++i) {
        const long ri = rank.divisor_den(i);
        const long ai = rank.divisor_num(i);
        Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(ri, ri);
        for (long k = 0; k + 1 < ri; ++k) shift(k, k + 1) = 1.0;
        shift(ri - 1, 0) = 1.0;
        Eigen::MatrixXcd clock_pow = Eigen::MatrixXcd::Zero(ri, ri);
        for (long k = 0; k < ri; ++k)
            clock_pow(k, k) = std::polar(1.0, -two_pi * static_cast<double>(ai) *
                                                  static_cast<double>(k) / static_cast<double>(ri));
        us.V[static_cast<std::size_t>(i)] = detail::kron_slot(rank, i, shift);
        us.U[static_cast<std::size_t>(i)] = detail::kron_slot(rank, i, clock_pow);
    }
    std::tie(us.xi, us.theta) = det_phases(us);
    return us;
}

/// The three relation families V_j V_k = V_k V_j, U_j U_k = U_k U_j and
/// zeta^{-a_kj} U_k V_j = V_j U_k with zeta = e^{2 pi i / r}.
inline bool check_cocycle(const UnitarySet& uset, long r, const Eigen::MatrixXi& A,
                          double tol = 1e-9) {
    const int n = static_cast<int>(A.rows());
    if (A.rows() != A.cols()) throw std::invalid_argument("check_cocycle: A must be square");
    if (uset.dim() != n || static_cast<int>(uset.U.size()) != n)
        throw std::invalid_argument("check_cocycle: dimension mismatch");
    const long m = uset.order();
    for (int j = 0; j < n; ++j)
        if (uset.V[static_cast<std::size_t>(j)].rows() != m || uset.V[static_cast<std::size_t>(j)].cols() != m ||
            uset.U[static_cast<std::size_t>(j)].rows() != m || uset.U[static_cast<std::size_t>(j)].cols() != m)
            throw std::invalid_argument("check_cocycle: matrices must share one order");

    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const auto& vj = uset.V[static_cast<std::size_t>(j)];
            const auto& vk = uset.V[static_cast<std::size_t>(k)];
            const auto& uj = uset.U[static_cast<std::size_t>(j)];
            const auto& uk = uset.U[static_cast<std::size_t>(k)];
            if (inf_norm(vj * vk - vk * vj) > tol) return false;
            if (inf_norm(uj * uk - uk * uj) > tol) return false;
        }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const auto& vj = uset.V[static_cast<std::size_t>(j)];
            const auto& uk = uset.U[static_cast<std::size_t>(k)];
            std::complex<double> zeta_pow =
                std::polar(1.0, -two_pi * static_cast<double>(A(k, j)) / static_cast<double>(r));
            if (inf_norm(zeta_pow * (uk * vj) - vj * uk) > tol) return false;
        }
    return true;
}

inline bool is_holomorphic(const Eigen::MatrixXi& A, const TorusData& torus, double tol) {
    if (A.rows() != torus.dim() || A.cols() != torus.dim())
        throw std::invalid_argument("is_holomorphic: dimension mismatch");
    Eigen::MatrixXcd at = A.cast<std::complex<double>>() * torus.T;
    return inf_norm(at - at.transpose()) <= tol;
}

/// Coefficient matrix M of the (0,2)-curvature
///   (i / 2 pi r) dzbar^t {T (T - Tbar)^{-1}}^t A^t (T - Tbar)^{-1} dzbar;
/// the form vanishes iff M is symmetric.
inline Eigen::MatrixXcd curvature_02(const Eigen::MatrixXi& A, long r, const TorusData& torus) {
    if (r < 1) throw std::invalid_argument("curvature_02: r must be >= 1");
    if (A.rows() != torus.dim() || A.cols() != torus.dim())
        throw std::invalid_argument("curvature_02: dimension mismatch");
    Eigen::MatrixXcd diff = torus.T - torus.T.conjugate();
    Eigen::MatrixXcd diff_inv = diff.inverse();
    std::complex<double> c(0.0, 1.0 / (two_pi * static_cast<double>(r)));
    return c * (torus.T * diff_inv).transpose() * A.cast<std::complex<double>>().transpose() *
           diff_inv;
}

/// Dimension of {M : M V_j = V_j M, M U_k = U_k M for all j, k}, via the
/// null space of the stacked commutator operators on order^2 unknowns.
inline long commutant_dimension(const UnitarySet& uset, double tol = 1e-9) {
    const int n = uset.dim();
    const long m = uset.order();
    const long m2 = m * m;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
    Eigen::MatrixXcd k(2 * n * m2, m2);
    long row = 0;
    auto add_block = [&](const Eigen::MatrixXcd& w) {
        k.block(row, 0, m2, m2) = kron(w.transpose(), id) - kron(id, w);
        row += m2;
    };
    for (const auto& w : uset.V) add_block(w);
    for (const auto& w : uset.U) add_block(w);

    // nullity of k from the spectrum of the Gram matrix k^H k
    Eigen::MatrixXcd gram = k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success) throw std::runtime_error("commutant_dimension: eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    double lmax = std::max(ev.maxCoeff(), 0.0);
    double thr = tol * static_cast<double>(m) * std::max(1.0, std::sqrt(lmax));
    thr = thr * thr;
    long dim = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= thr) ++dim;
    return dim;
}

enum class UnitaryFrame { ambient, divisor };

struct FactorizedBundle {
    long r = 1;
    Eigen::MatrixXi A;
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    UnitarySet uset;
    UnitaryFrame frame = UnitaryFrame::divisor;
    RankData rank;

    int dim() const { return static_cast<int>(A.rows()); }
};

/// Determinant phases of a set expressed in ambient coordinates: divisor
/// frame phases pull back through the certificate transforms.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> ambient_phases(const UnitarySet& uset,
                                                                  const RankData& rank,
                                                                  UnitaryFrame frame) {
    if (frame == UnitaryFrame::ambient) return {uset.xi, uset.theta};
    Eigen::VectorXd xi = rank.tright_inv.transpose() * uset.xi;
    Eigen::VectorXd theta = rank.tleft_inv * uset.theta;
    return {std::move(xi), std::move(theta)};
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> ambient_phases(const FactorizedBundle& e) {
    return ambient_phases(e.uset, e.rank, e.frame);
}

inline FactorizedBundle make_bundle(long r, const Eigen::MatrixXi& A, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& q, UnitarySet uset, UnitaryFrame frame,
                                    double tol = 1e-9) {
    FactorizedBundle e;
    e.rank = rank_data(r, A);
    if (p.size() != e.rank.dim() || q.size() != e.rank.dim())
        throw std::invalid_argument("make_bundle: p, q must have dimension n");
    if (uset.order() != e.rank.rprime)
        throw std::invalid_argument("make_bundle: unitary set order differs from r'");
    const Eigen::MatrixXi& cocycle_target = frame == UnitaryFrame::ambient ? A : e.rank.divisor_matrix;
    if (!check_cocycle(uset, r, cocycle_target, tol))
        throw std::invalid_argument("make_bundle: unitary set fails the cocycle condition");
    std::tie(uset.xi, uset.theta) = det_phases(uset, tol);
    e.r = r;
    e.A = A;
    e.p = p;
    e.q = q;
    e.uset = std::move(uset);
    e.frame = frame;
    return e;
}

inline FactorizedBundle standard_bundle(long r, const Eigen::MatrixXi& A, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& q) {
    RankData rank = rank_data(r, A);
    if (p.size() != rank.dim() || q.size() != rank.dim())
        throw std::invalid_argument("standard_bundle: p, q must have dimension n");
    FactorizedBundle e;
    e.r = r;
    e.A = A;
    e.p = p;
    e.q = q;
    e.uset = standard_unitary_set(rank);
    e.frame = UnitaryFrame::divisor;
    e.rank = std::move(rank);
    return e;
}

/// Tensor with the flat line bundle of transition scalars e^{i tau_j},
/// e^{i sigma_k} and parameters (u, v): shifts (p, q) by (r u, r v) and
/// multiplies V_j, U_k by the scalars. For divisor-frame sets the scalar
/// vectors transform the same way the phases do.
inline FactorizedBundle tensor_line(const FactorizedBundle& e, const Eigen::VectorXd& tau,
                                    const Eigen::VectorXd& sigma, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v) {
    const int n = e.dim();
    if (tau.size() != n || sigma.size() != n || u.size() != n || v.size() != n)
        throw std::invalid_argument("tensor_line: dimension mismatch");
    FactorizedBundle out = e;
    out.p += static_cast<double>(e.r) * u;
    out.q += static_cast<double>(e.r) * v;
    Eigen::VectorXd t = tau, s = sigma;
    if (e.frame == UnitaryFrame::divisor) {
        t = e.rank.tright.transpose() * tau;
        s = e.rank.tleft * sigma;
    }
    for (int j = 0; j < n; ++j) {
        out.uset.V[static_cast<std::size_t>(j)] *= std::polar(1.0, t(j));
        out.uset.U[static_cast<std::size_t>(j)] *= std::polar(1.0, s(j));
    }
    std::tie(out.uset.xi, out.uset.theta) = det_phases(out.uset);
    return out;
}

/// Connection coefficient: the dy-row-covector
///   -(i / 2 pi) (1/r) (x^t A^t + p^t + q^t T).
inline Eigen::RowVectorXcd connection_coefficient(const FactorizedBundle& e, const TorusData& torus,
                                                  const Eigen::VectorXd& x,
                                                  const Eigen::VectorXd& y) {
    (void)y;  // the dy coefficient does not depend on y
    if (x.size() != e.dim() || torus.dim() != e.dim())
        throw std::invalid_argument("connection_coefficient: dimension mismatch");
    Eigen::RowVectorXd real_part =
        x.transpose() * e.A.cast<double>().transpose() + e.p.transpose();
    Eigen::RowVectorXcd row = real_part.cast<std::complex<double>>() +
                              e.q.transpose().cast<std::complex<double>>() * torus.T;
    std::complex<double> c(0.0, -1.0 / (two_pi * static_cast<double>(e.r)));
    return c * row;
}

struct PrimitiveForm {
    long r0 = 1;
    Eigen::MatrixXi A0;
    Eigen::VectorXd p0;
    Eigen::VectorXd q0;
    long k = 1;
};

/// Minimal integral pair with A0/r0 = A/r, dividing (r, A, p, q) by
/// k = gcd(r, entries of A).
inline PrimitiveForm primitive_form(long r, const Eigen::MatrixXi& A, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& q) {
    if (r < 1) throw std::invalid_argument("primitive_form: r must be >= 1");
    long k = r;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            long v = std::abs(static_cast<long>(A(i, j)));
            if (v != 0) k = std::gcd(k, v);
        }
    PrimitiveForm pf;
    pf.k = k;
    pf.r0 = r / k;
    pf.A0 = A / static_cast<int>(k);
    pf.p0 = p / static_cast<double>(k);
    pf.q0 = q / static_cast<double>(k);
    return pf;
}

struct BundleIsoReport {
    bool isomorphic = false;
    bool chern_mismatch = false;  // primitive (r, A) pairs differ
    Eigen::VectorXcd w;           // congruence test vector
    Eigen::VectorXd alpha, beta;  // w = alpha + T^t beta
    Eigen::VectorXd mem_p, mem_q; // lattice membership vectors
};

/// Theorem-level classifier: reduce both bundles to primitive form, reject
/// on differing Chern data, and test
///   (p + T^t q) - (p' + T^t q') - (r/r')(theta - theta') - T^t (r/r')(xi' - xi)
/// for membership in 2 pi r (left^{-1} D + T^t (right^{-1})^t D).
inline BundleIsoReport bundle_iso_report(const FactorizedBundle& e1, const FactorizedBundle& e2,
                                         const TorusData& torus, double tol = 1e-9) {
    if (e1.dim() != torus.dim() || e2.dim() != torus.dim())
        throw std::invalid_argument("bundle_iso: torus mismatch");
    if (!is_holomorphic(e1.A, torus, tol) || !is_holomorphic(e2.A, torus, tol))
        throw std::invalid_argument("bundle_iso: non-holomorphic bundle (AT != (AT)^t)");

    BundleIsoReport rep;
    PrimitiveForm f1 = primitive_form(e1.r, e1.A, e1.p, e1.q);
    PrimitiveForm f2 = primitive_form(e2.r, e2.A, e2.p, e2.q);
    if (f1.r0 != f2.r0 || f1.A0 != f2.A0) {
        rep.chern_mismatch = true;
        return rep;
    }
    RankData rank0 = rank_data(f1.r0, f1.A0);
    auto [xi1, th1] = ambient_phases(e1);
    auto [xi2, th2] = ambient_phases(e2);
    double rr = static_cast<double>(f1.r0) / static_cast<double>(rank0.rprime);

    Eigen::VectorXd a = f1.p0 - f2.p0 - rr * (th1 - th2);
    Eigen::VectorXd b = f1.q0 - f2.q0 + rr * (xi1 - xi2);
    rep.w = a.cast<std::complex<double>>() + torus.T.transpose() * b.cast<std::complex<double>>();
    std::tie(rep.alpha, rep.beta) = t_decompose(rep.w, torus);

    double scale = two_pi * static_cast<double>(f1.r0);
    rep.mem_p = rank0.tleft * rep.alpha / scale;
    rep.mem_q = rank0.tright.transpose() * rep.beta / scale;
    rep.isomorphic =
        in_divisor_lattice(rep.mem_p, rank0, tol) && in_divisor_lattice(rep.mem_q, rank0, tol);
    return rep;
}

inline bool bundle_iso(const FactorizedBundle& e1, const FactorizedBundle& e2,
                       const TorusData& torus, double tol = 1e-9) {
    return bundle_iso_report(e1, e2, torus, tol).isomorphic;
}

}  // namespace hmstori

#pragma once

// Affine Lagrangian multi-sections with unitary local systems: the graph
// y = (1/r) A x + (1/r) p on the mirror torus together with the holonomy
// vector q of the flat line bundle along it, and their isomorphism
// classifier
//   p = p' (mod 2 pi r left^{-1} D),  q = q' (mod 2 pi r (right^{-1})^t D).

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hmstori/bundle.hpp"
#include "hmstori/rank.hpp"
#include "hmstori/torus.hpp"

namespace hmstori {

struct LagrangianBrane {
    long r = 1;
    Eigen::MatrixXi A;
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    RankData rank;

    int dim() const { return static_cast<int>(A.rows()); }
};

inline LagrangianBrane make_brane(long r, const Eigen::MatrixXi& A, const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& q) {
    LagrangianBrane l;
    l.rank = rank_data(r, A);
    if (p.size() != l.rank.dim() || q.size() != l.rank.dim())
        throw std::invalid_argument("make_brane: p, q must have dimension n");
    l.r = r;
    l.A = A;
    l.p = p;
    l.q = q;
    return l;
}

/// Object condition on the mirror side: omega A and B A both symmetric.
/// Equivalent to the holomorphicity condition AT = (AT)^t on the complex
/// side; computed independently from the two symplectic forms.
inline bool is_brane(const Eigen::MatrixXi& A, const TorusData& torus, double tol) {
    if (A.rows() != torus.dim() || A.cols() != torus.dim())
        throw std::invalid_argument("is_brane: dimension mismatch");
    Eigen::MatrixXd oa = torus.omega * A.cast<double>();
    Eigen::MatrixXd ba = torus.bfield * A.cast<double>();
    return (oa - oa.transpose()).cwiseAbs().maxCoeff() <= tol &&
           (ba - ba.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// Component-wise wrap into [0, 2pi)^n.
inline Eigen::VectorXd wrap_2pi(Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double x = v(i) - two_pi * std::floor(v(i) / two_pi);
        if (x >= two_pi) x -= two_pi;
        if (x < 0.0) x += two_pi;
        v(i) = x;
    }
    return v;
}

/// The r' points of the multi-section over a base point:
///   (1/r) A x + (1/r) p + (2 pi / r) A right M,
/// M = (m_1, ..., m_s, 0, ..., 0)^t with 0 <= m_i <= r_i' - 1, reduced to
/// the fundamental domain [0, 2pi)^n.
inline std::vector<Eigen::VectorXd> fiber_points(const LagrangianBrane& l,
                                                 const Eigen::VectorXd& xcheck) {
    const int n = l.dim();
    if (xcheck.size() != n) throw std::invalid_argument("fiber_points: dimension mismatch");
    Eigen::VectorXd base = (l.A.cast<double>() * xcheck + l.p) / static_cast<double>(l.r);
    Eigen::MatrixXd ab = l.A.cast<double>() * l.rank.tright;

    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(l.rank.rprime));
    std::vector<long> idx(static_cast<std::size_t>(l.rank.s), 0);
    for (;;) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < l.rank.s; ++i) m(i) = static_cast<double>(idx[static_cast<std::size_t>(i)]);
        pts.push_back(wrap_2pi(base + (two_pi / static_cast<double>(l.r)) * (ab * m)));
        int pos = 0;
        while (pos < l.rank.s) {
            if (++idx[static_cast<std::size_t>(pos)] < l.rank.divisor_den(pos)) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos >= l.rank.s) break;
    }
    return pts;
}

struct BraneIsoReport {
    bool isomorphic = false;
    bool chern_mismatch = false;
    Eigen::VectorXd mem_p, mem_q;  // lattice membership vectors
    bool has_witness = false;
    Eigen::VectorXi witness_n;     // integer witness of the holonomy isomorphism
};

/// Classifier for two branes, after the same primitive-form reduction used
/// for bundles. When isomorphic, also reports the integer vector N with
/// right^t (q' - q) = 2 pi r (N_1/r_1', ..., N_s/r_s', N_{s+1}, ..., N_n).
inline BraneIsoReport brane_iso_report(const LagrangianBrane& l1, const LagrangianBrane& l2,
                                       double tol = 1e-9) {
    BraneIsoReport rep;
    PrimitiveForm f1 = primitive_form(l1.r, l1.A, l1.p, l1.q);
    PrimitiveForm f2 = primitive_form(l2.r, l2.A, l2.p, l2.q);
    if (f1.r0 != f2.r0 || f1.A0 != f2.A0) {
        rep.chern_mismatch = true;
        return rep;
    }
    RankData rank0 = rank_data(f1.r0, f1.A0);
    double scale = two_pi * static_cast<double>(f1.r0);
    rep.mem_p = rank0.tleft * (f1.p0 - f2.p0) / scale;
    rep.mem_q = rank0.tright.transpose() * (f1.q0 - f2.q0) / scale;
    rep.isomorphic =
        in_divisor_lattice(rep.mem_p, rank0, tol) && in_divisor_lattice(rep.mem_q, rank0, tol);
    if (rep.isomorphic) {
        rep.has_witness = true;
        rep.witness_n.resize(rank0.dim());
        for (int i = 0; i < rank0.dim(); ++i)
            rep.witness_n(i) = static_cast<int>(
                std::lround(-rep.mem_q(i) * static_cast<double>(rank0.divisor_den(i))));
    }
    return rep;
}

inline bool brane_iso(const LagrangianBrane& l1, const LagrangianBrane& l2, double tol = 1e-9) {
    return brane_iso_report(l1, l2, tol).isomorphic;
}

}  // namespace hmstori

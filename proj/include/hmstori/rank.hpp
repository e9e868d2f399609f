#pragma once

// Rank/divisor data attached to a pair (r, A): the Smith certificate of A,
// the reduced fractions a_i'/r_i' with a_i'/r_i' = d_i/r, and the rank
// r' = r_1' ... r_s' of the associated bundle.

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hmstori/exact.hpp"

namespace hmstori {

inline IntMat to_intmat(const Eigen::MatrixXi& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("to_intmat: matrix must be square");
    IntMat m(static_cast<int>(a.rows()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

inline long to_long_checked(const Int& v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error(std::string(what) + ": value does not fit in 64 bits");
    return static_cast<long>(static_cast<std::int64_t>(v));
}

/// Integer-matrix entries converted to double. Entries must be exactly
/// representable; unimodular certificates of small inputs always are.
inline Eigen::MatrixXd to_eigen_d(const IntMat& m) {
    Eigen::MatrixXd out(m.n(), m.n());
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) {
            long v = to_long_checked(m(i, j), "to_eigen_d");
            if (v > (1L << 53) || v < -(1L << 53))
                throw std::overflow_error("to_eigen_d: entry exceeds exact double range");
            out(i, j) = static_cast<double>(v);
        }
    return out;
}

struct RankData {
    long r = 1;
    Eigen::MatrixXi A;
    SnfCertificate cert;
    int s = 0;                          // number of nonzero elementary divisors
    std::vector<ReducedFraction> fracs; // a_i'/r_i', i < s
    long rprime = 1;

    // certificate transforms as exact doubles, for lattice arithmetic
    Eigen::MatrixXd tleft, tright;          // the unimodular pair (left, right)
    Eigen::MatrixXd tleft_inv, tright_inv;
    Eigen::MatrixXi divisor_matrix;         // left * A * right, diagonal

    int dim() const { return static_cast<int>(A.rows()); }

    /// r_i' for i < s, and 1 for the trailing zero divisors.
    long divisor_den(int i) const {
        if (i < 0 || i >= dim()) throw std::out_of_range("divisor_den");
        if (i >= s) return 1;
        return to_long_checked(fracs[static_cast<std::size_t>(i)].den, "divisor_den");
    }

    long divisor_num(int i) const {
        if (i < 0 || i >= s) throw std::out_of_range("divisor_num");
        return to_long_checked(fracs[static_cast<std::size_t>(i)].num, "divisor_num");
    }
};

inline RankData rank_data(long r, const Eigen::MatrixXi& A) {
    if (r < 1) throw std::invalid_argument("rank_data: r must be >= 1");
    if (A.rows() != A.cols() || A.rows() < 1)
        throw std::invalid_argument("rank_data: A must be square, n >= 1");
    RankData rd;
    rd.r = r;
    rd.A = A;
    rd.cert = snf(to_intmat(A));

    const int n = static_cast<int>(A.rows());
    rd.s = 0;
    while (rd.s < n && rd.cert.diag[static_cast<std::size_t>(rd.s)] != 0) ++rd.s;

    rd.rprime = 1;
    for (int i = 0; i < rd.s; ++i) {
        ReducedFraction f = reduce_fraction(rd.cert.diag[static_cast<std::size_t>(i)], Int(r));
        rd.rprime *= to_long_checked(f.den, "rank_data");
        rd.fracs.push_back(std::move(f));
    }

    rd.tleft = to_eigen_d(rd.cert.left);
    rd.tright = to_eigen_d(rd.cert.right);
    rd.tleft_inv = to_eigen_d(unimodular_inverse(rd.cert.left));
    rd.tright_inv = to_eigen_d(unimodular_inverse(rd.cert.right));
    rd.divisor_matrix = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i)
        rd.divisor_matrix(i, i) =
            static_cast<int>(to_long_checked(rd.cert.diag[static_cast<std::size_t>(i)], "rank_data"));
    return rd;
}

}  // namespace hmstori

// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Each criterion carries its stated runtime budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmstori/hmstori.hpp"
#include "oracles.hpp"

using namespace hmstori;
using std::complex;

namespace {

const double pi = std::numbers::pi;

Eigen::MatrixXi diag2(int a, int b) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Eigen::MatrixXcd i_identity(int n) {
    return complex<double>(0, 1) * Eigen::MatrixXcd::Identity(n, n);
}

UnitarySet counterexample_set(bool primed) {
    UnitarySet us;
    Eigen::MatrixXcd v1(2, 2), u1(2, 2), id = Eigen::MatrixXcd::Identity(2, 2);
    v1 << 0, 1, 1, 0;
    if (primed)
        u1 << complex<double>(0, 1), 0, 0, complex<double>(0, -1);
    else
        u1 << 1, 0, 0, -1;
    us.V = {v1, id};
    us.U = {u1, id};
    std::tie(us.xi, us.theta) = det_phases(us);
    return us;
}

bool criterion_1_snf(std::string& note) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = dim(rng);
        IntMat a = oracles::random_intmat(rng, n, -5, 5);
        SnfCertificate cert = snf(a);
        IntMat prod = cert.left * a * cert.right;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (prod(i, j) != (i == j ? cert.diag[static_cast<std::size_t>(i)] : Int(0))) {
                    note = "certificate product mismatch";
                    return false;
                }
        Int dl = exact_det(cert.left), dr = exact_det(cert.right);
        if (!((dl == 1 || dl == -1) && (dr == 1 || dr == -1))) {
            note = "certificate factor is not unimodular";
            return false;
        }
        for (int i = 0; i + 1 < n; ++i) {
            const Int& d = cert.diag[static_cast<std::size_t>(i)];
            const Int& e = cert.diag[static_cast<std::size_t>(i) + 1];
            if (d < 0 || (d == 0 && e != 0) || (e != 0 && e % d != 0)) {
                note = "divisibility chain violated";
                return false;
            }
        }
    }
    note = "1000 matrices, exact certificates";
    return true;
}

bool criterion_2_counterexample(std::string& note) {
    TorusData t = make_torus(i_identity(2), 1e-9);
    FactorizedBundle e1 = make_bundle(2, diag2(1, 0), vec2(0, 0), vec2(0, 0),
                                      counterexample_set(false), UnitaryFrame::ambient, 1e-9);
    FactorizedBundle e2 = make_bundle(2, diag2(1, 0), vec2(0, 0), vec2(0, 0),
                                      counterexample_set(true), UnitaryFrame::ambient, 1e-9);
    BundleIsoReport rep = bundle_iso_report(e1, e2, t, 1e-9);
    if (rep.isomorphic) {
        note = "bundle classifier called the pair isomorphic";
        return false;
    }
    // the congruence vector is exactly (-pi, 0): alpha/(2 pi r) = -1/4
    if (std::abs(rep.alpha(0) + pi) > 1e-9 || std::abs(rep.alpha(1)) > 1e-9 ||
        rep.beta.cwiseAbs().maxCoeff() > 1e-9) {
        note = "unexpected congruence vector";
        return false;
    }
    if (oracles::in_lattice_exact({Rational(-1, 4), Rational(0)}, {2, 1})) {
        note = "exact rational membership oracle disagrees";
        return false;
    }
    LagrangianBrane n1 = naive_map(e1), n2 = naive_map(e2);
    if ((n1.p - n2.p).cwiseAbs().maxCoeff() > 0 || (n1.q - n2.q).cwiseAbs().maxCoeff() > 0) {
        note = "naive images differ";
        return false;
    }
    LagrangianBrane f1 = apply_functor(e1, t, 1e-9), f2 = apply_functor(e2, t, 1e-9);
    if (brane_iso(f1, f2, 1e-9)) {
        note = "functor images were classified isomorphic";
        return false;
    }
    note = "E != E', naive images equal, F images distinct";
    return true;
}

bool criterion_3_holomorphicity(std::string& note) {
    std::mt19937 rng(33);
    int holo_count = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXi a;
        TorusData t = [&] {
            if (trial % 3 == 0) {
                auto inst = oracles::random_commuting_instance(rng, n, 1e-9);
                a = inst.A;
                return inst.torus;
            }
            a = oracles::random_int_matrix(rng, n, -3, 3);
            return oracles::random_torus(rng, n, 1e-9);
        }();
        long r = 1 + static_cast<long>(rng() % 6);
        bool holo = is_holomorphic(a, t, 1e-9);
        Eigen::MatrixXcd m = curvature_02(a, r, t);
        bool curv = inf_norm(m - m.transpose()) <= 1e-9;
        bool brane = is_brane(a, t, 1e-9);
        if (holo != curv || holo != brane) {
            note = "the three conditions disagree";
            return false;
        }
        if (holo) ++holo_count;
    }
    std::ostringstream os;
    os << "500 instances, " << holo_count << " holomorphic";
    note = os.str();
    return holo_count > 100 && holo_count < 400;
}

bool criterion_4_multiplicity(std::string& note) {
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        long r = 1 + static_cast<long>(rng() % 6);
        Eigen::MatrixXi a = oracles::random_int_matrix(rng, n, -3, 3);
        Eigen::VectorXd p(n), q = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) p(i) = u(rng);
        LagrangianBrane l = make_brane(r, a, p, q);
        for (int bp = 0; bp < 5; ++bp) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x(i) = u(rng);
            auto pts = fiber_points(l, x);
            if (static_cast<long>(pts.size()) != l.rank.rprime) {
                note = "fiber cardinality differs from r'";
                return false;
            }
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    if (oracles::torus_dist(pts[i], pts[j]) <= 1e-9) {
                        note = "fiber points collide";
                        return false;
                    }
        }
    }
    note = "200 branes, 5 base points each";
    return true;
}

bool criterion_5_standard_sets(std::string& note) {
    // every divisor profile reachable with r <= 6, n <= 3, r' <= 12; the
    // standard set depends on (r, A) only through it
    std::vector<std::vector<long>> chains;
    const long cap = 12;
    for (int n = 1; n <= 3; ++n) {
        std::vector<long> cur(static_cast<std::size_t>(n), 0);
        std::function<void(int, long)> rec = [&](int pos, long prev) {
            if (pos == n) {
                chains.push_back(cur);
                return;
            }
            cur[static_cast<std::size_t>(pos)] = 0;
            for (int rest = pos; rest < n; ++rest) cur[static_cast<std::size_t>(rest)] = 0;
            chains.push_back(cur);  // zeros from here on
            for (long d = (prev == 0 ? 1 : prev); d <= cap; prev == 0 ? ++d : d += prev) {
                if (prev != 0 && d % prev != 0) continue;
                cur[static_cast<std::size_t>(pos)] = d;
                rec(pos + 1, d);
            }
            cur[static_cast<std::size_t>(pos)] = 0;
        };
        rec(0, 0);
    }

    std::mt19937 rng(55);
    int tested = 0;
    for (const auto& chain : chains) {
        int n = static_cast<int>(chain.size());
        Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = static_cast<int>(chain[static_cast<std::size_t>(i)]);
        for (long r = 1; r <= 6; ++r) {
            RankData rank = rank_data(r, a);
            if (rank.rprime > 12) continue;
            UnitarySet us = standard_unitary_set(rank);
            if (!check_cocycle(us, r, rank.divisor_matrix, 1e-9)) {
                note = "standard set fails its cocycle";
                return false;
            }
            if (commutant_dimension(us, 1e-9) != 1) {
                note = "standard set has commutant dimension != 1";
                return false;
            }
            ++tested;
        }
    }
    // conjugated spot checks: divisors are invariant, the set is unchanged
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        long r = 1 + static_cast<long>(rng() % 6);
        Eigen::MatrixXi a =
            oracles::to_eigen_i(oracles::random_unimodular(rng, n)) *
            oracles::random_int_matrix(rng, n, -2, 2) *
            oracles::to_eigen_i(oracles::random_unimodular(rng, n));
        RankData rank = rank_data(r, a);
        if (rank.rprime > 12) continue;
        UnitarySet us = standard_unitary_set(rank);
        if (!check_cocycle(us, r, rank.divisor_matrix, 1e-9) || commutant_dimension(us, 1e-9) != 1) {
            note = "conjugated standard set fails";
            return false;
        }
        ++tested;
    }
    std::ostringstream os;
    os << tested << " divisor profiles";
    note = os.str();
    return tested > 300;
}

bool criterion_6_lattice_action(std::string& note) {
    std::mt19937 rng(66);
    std::uniform_int_distribution<int> mk(-3, 3);
    std::uniform_int_distribution<int> steps(-8, 8);
    int done = 0;
    while (done < 100) {
        int n = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXi a = oracles::random_symmetric_int(rng, n, -3, 3);
        long r = 1 + static_cast<long>(rng() % 6);
        RankData rank = rank_data(r, a);
        if (rank.s < 1) continue;  // the breaking offset needs s >= 1
        TorusData t = make_torus(i_identity(n), 1e-9);
        Eigen::VectorXd p(n), q(n);
        for (int i = 0; i < n; ++i) {
            p(i) = steps(rng) * pi / 4;
            q(i) = steps(rng) * pi / 4;
        }
        FactorizedBundle e = standard_bundle(r, a, p, q);

        Eigen::VectorXd m(n), np(n);
        for (int i = 0; i < n; ++i) {
            m(i) = static_cast<double>(mk(rng)) / static_cast<double>(rank.divisor_den(i));
            np(i) = static_cast<double>(mk(rng)) / static_cast<double>(rank.divisor_den(i));
        }
        // shifts drawn from the modulus lattice 2 pi r (left^{-1} D + ...)
        Eigen::VectorXd dp = two_pi * static_cast<double>(r) * (rank.tleft_inv * m);
        Eigen::VectorXd dq = two_pi * static_cast<double>(r) * (rank.tright_inv.transpose() * np);
        FactorizedBundle inside = tensor_line(e, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                                              dp / static_cast<double>(r), dq / static_cast<double>(r));
        if (!bundle_iso(e, inside, t, 1e-9)) {
            note = "lattice shift changed the class";
            return false;
        }
        // strictly outside: offset by 2 pi r left^{-1} e_1 / (2 r_1')
        Eigen::VectorXd off = Eigen::VectorXd::Zero(n);
        off(0) = 1.0 / (2.0 * static_cast<double>(rank.divisor_den(0)));
        Eigen::VectorXd dp_off = dp + two_pi * static_cast<double>(r) * (rank.tleft_inv * off);
        FactorizedBundle outside = tensor_line(e, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                                               dp_off / static_cast<double>(r), dq / static_cast<double>(r));
        if (bundle_iso(e, outside, t, 1e-9)) {
            note = "off-lattice shift was not detected";
            return false;
        }
        ++done;
    }
    note = "100 bundles, both directions";
    return true;
}

bool criterion_7_bijection(std::string& note) {
    TorusData t = make_torus(i_identity(2), 1e-9);
    FamilySpec fam;
    fam.pairs = {{2, diag2(1, 0)}, {1, Eigen::MatrixXi::Zero(2, 2)}};
    fam.grid_step = pi;
    for (double a : {0.0, pi / 2, pi, 3 * pi / 2})
        fam.twists.push_back({vec2(0, 0), vec2(a, 0)});

    IsoClassReport rep = verify_bijection(fam, t, false, 1e-9);
    if (rep.verdict != Verdict::bijection) {
        note = std::string("functor verdict: ") + to_string(rep.verdict);
        return false;
    }

    IsoClassReport naive = verify_bijection(fam, t, true, 1e-9);
    if (naive.verdict != Verdict::not_injective) {
        note = std::string("naive verdict: ") + to_string(naive.verdict);
        return false;
    }
    // the counterexample pair witnesses the failure: find both objects and
    // recheck classes and images
    FactorizedBundle e1 = standard_bundle(2, diag2(1, 0), vec2(0, 0), vec2(0, 0));
    FactorizedBundle e2 = tensor_line(e1, vec2(0, 0), vec2(pi / 2, 0), vec2(0, 0), vec2(0, 0));
    auto locate = [&](const FactorizedBundle& e) {
        std::string id = canonical_dump(encode_bundle(e));
        for (std::size_t i = 0; i < naive.bundle_ids.size(); ++i)
            if (naive.bundle_ids[i] == id) return static_cast<int>(i);
        return -1;
    };
    int i1 = locate(e1), i2 = locate(e2);
    if (i1 < 0 || i2 < 0) {
        note = "counterexample objects missing from the family";
        return false;
    }
    bool distinct = naive.bundle_class_of[static_cast<std::size_t>(i1)] !=
                    naive.bundle_class_of[static_cast<std::size_t>(i2)];
    bool collide =
        naive.brane_class_of[static_cast<std::size_t>(naive.image_brane_of[static_cast<std::size_t>(i1)])] ==
        naive.brane_class_of[static_cast<std::size_t>(naive.image_brane_of[static_cast<std::size_t>(i2)])];
    if (!distinct || !collide) {
        note = "counterexample pair is not a witness";
        return false;
    }
    std::ostringstream os;
    os << rep.classes_bundle.size() << " bundle classes onto " << rep.grid_classes.size()
       << " grid brane classes";
    note = os.str();
    return true;
}

bool criterion_8_round_trip(std::string& note) {
    std::mt19937 rng(88);
    std::uniform_real_distribution<double> u(-two_pi, two_pi);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        TorusData t = make_torus(i_identity(n), 1e-9);
        Eigen::MatrixXi a = oracles::random_symmetric_int(rng, n, -3, 3);
        long r = 1 + static_cast<long>(rng() % 6);
        Eigen::VectorXd p(n), q(n);
        for (int i = 0; i < n; ++i) {
            p(i) = u(rng);
            q(i) = u(rng);
        }
        LagrangianBrane l = make_brane(r, a, p, q);
        FactorizedBundle e = inverse_representative(l);
        if (!brane_iso(apply_functor(e, t, 1e-9), l, 1e-9)) {
            note = "round trip failed";
            return false;
        }
    }
    note = "200 branes";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"SNF soundness", 5.0, criterion_1_snf},
        {"counterexample end-to-end", 1.0, criterion_2_counterexample},
        {"holomorphicity equivalence", 10.0, criterion_3_holomorphicity},
        {"rank/multiplicity agreement", 5.0, criterion_4_multiplicity},
        {"standard-set validity", 30.0, criterion_5_standard_sets},
        {"classifying-lattice action", 1e9, criterion_6_lattice_action},
        {"bijectivity certificate", 60.0, criterion_7_bijection},
        {"inverse round trip", 10.0, criterion_8_round_trip},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string note;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criteria[i].run(note);
        } catch (const std::exception& e) {
            ok = false;
            note = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > criteria[i].budget_s) {
            ok = false;
            note += " [over time budget]";
        }
        std::printf("[%s] criterion %zu: %s (%.2f s) %s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, secs, note.c_str());
        if (!ok) ++failures;
    }
    return failures;
}

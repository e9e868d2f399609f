#pragma once

// Command-line surface. Subcommands: snf, mkbundle, check, iso, mirror,
// naive-mirror, invert, verify-bijection. Exit codes: 0 success or
// affirmative verdict, 1 negative verdict or failed check, 2 input error.
// Tolerance resolution: --tol, then HMS_TOL, then the torus file, then 1e-9.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hmstori/io.hpp"
#include "hmstori/mirror.hpp"

namespace hmstori {

namespace cli_detail {

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return json::parse(in);
}

inline ObjectFile load_object(const std::string& path, const char* want_kind = nullptr) {
    ObjectFile f = decode_object_file(load_json(path));
    if (want_kind && f.kind != want_kind)
        throw std::invalid_argument(path + ": expected kind \"" + want_kind + "\", found \"" + f.kind + "\"");
    return f;
}

inline void emit(const json& j, const std::string& out_path, std::ostream& out) {
    std::string text = canonical_dump(j);
    if (out_path.empty()) {
        out << text << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write file: " + out_path);
        f << text << "\n";
    }
}

inline json encode_intmat(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.n(); ++j) row.push_back(to_long_checked(m(i, j), "snf output"));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline double resolve_tol(double cli_tol) {
    if (cli_tol > 0.0) return cli_tol;
    if (const char* env = std::getenv("HMS_TOL")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("HMS_TOL is not a number");
        }
    }
    return -1.0;  // defer to torus file / default
}

struct LooseBundle {
    long r = 1;
    Eigen::MatrixXi A;
    Eigen::VectorXd p, q;
    UnitarySet uset;
    UnitaryFrame frame = UnitaryFrame::divisor;
    RankData rank;
};

// reads a bundle payload without enforcing unitarity or the cocycle, so
// `check` can report failures instead of refusing the file
inline LooseBundle decode_bundle_loose(const json& j) {
    LooseBundle b;
    b.r = j.at("r").get<long>();
    b.A = decode_imatrix(j.at("A"));
    b.p = decode_rvector(j.at("p"));
    b.q = decode_rvector(j.at("q"));
    b.rank = rank_data(b.r, b.A);
    if (!j.contains("U")) {
        b.uset = standard_unitary_set(b.rank);
        b.frame = UnitaryFrame::divisor;
        return b;
    }
    const json& ju = j.at("U");
    for (const auto& m : ju.at("V")) b.uset.V.push_back(decode_cmatrix(m));
    for (const auto& m : ju.at("U")) b.uset.U.push_back(decode_cmatrix(m));
    b.frame = ju.value("frame", std::string("ambient")) == "divisor" ? UnitaryFrame::divisor
                                                                     : UnitaryFrame::ambient;
    return b;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;

    CLI::App app{"mirror-pair constructors and isomorphism classifiers on tori"};
    app.name("hmstori");
    double cli_tol = -1.0;
    app.add_option("--tol", cli_tol, "numerical tolerance (overrides HMS_TOL and file values)");
    app.require_subcommand(1);

    std::string in_a, in_b, torus_path, uset_path, out_path;

    auto* c_snf = app.add_subcommand("snf", "Smith normal form of an integer matrix, with certificates");
    c_snf->add_option("matrix", in_a, "matrix JSON file: [[..]] or {\"A\": [[..]]}")->required();
    c_snf->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* c_mk = app.add_subcommand("mkbundle", "materialize the standard unitary set of a bundle");
    c_mk->add_option("bundle", in_a, "bundle object file")->required();
    c_mk->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* c_check = app.add_subcommand("check", "cocycle, holomorphicity and brane-condition checks");
    c_check->add_option("object", in_a, "bundle or brane object file")->required();
    c_check->add_option("--torus", torus_path, "torus object file")->required();

    auto* c_iso = app.add_subcommand("iso", "isomorphism classifier for two bundles or two branes");
    c_iso->add_option("a", in_a, "first object file")->required();
    c_iso->add_option("b", in_b, "second object file")->required();
    c_iso->add_option("--torus", torus_path, "torus object file")->required();

    auto* c_mirror = app.add_subcommand("mirror", "apply the mirror map F to a bundle");
    c_mirror->add_option("bundle", in_a, "bundle object file")->required();
    c_mirror->add_option("--torus", torus_path, "torus object file")->required();
    c_mirror->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* c_naive = app.add_subcommand("naive-mirror", "parameter-forgetting map (for comparison)");
    c_naive->add_option("bundle", in_a, "bundle object file")->required();
    c_naive->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto* c_invert = app.add_subcommand("invert", "inverse representative of a brane under F");
    c_invert->add_option("brane", in_a, "brane object file")->required();
    c_invert->add_option("--uset", uset_path, "unitary set JSON ({\"V\":..,\"U\":..,\"frame\":..})");
    c_invert->add_option("--torus", torus_path, "torus object file (validates the brane)");
    c_invert->add_option("-o,--output", out_path, "output file (default: stdout)");

    bool naive_family = false;
    auto* c_verify = app.add_subcommand("verify-bijection", "finite-family bijection certificate");
    c_verify->add_option("family", in_a, "family object file")->required();
    c_verify->add_flag("--naive", naive_family, "use the parameter-forgetting map instead of F");
    c_verify->add_option("-o,--output", out_path, "output file (default: stdout)");

    std::vector<const char*> argv;
    argv.push_back("hmstori");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        double tol_override = resolve_tol(cli_tol);
        auto effective_tol = [&](const TorusData* torus) {
            if (tol_override > 0.0) return tol_override;
            return torus ? torus->tol : 1e-9;
        };
        auto load_torus = [&](const std::string& path) {
            return decode_torus(load_object(path, "torus").payload, tol_override);
        };

        if (*c_snf) {
            json j = load_json(in_a);
            Eigen::MatrixXi a = decode_imatrix(j.is_object() && j.contains("A") ? j["A"] : j);
            IntMat m = to_intmat(a);
            SnfCertificate cert = snf(m);
            // full recheck before emitting
            IntMat prod = cert.left * m * cert.right;
            Int dl = exact_det(cert.left), dr = exact_det(cert.right);
            bool ok = (dl == 1 || dl == -1) && (dr == 1 || dr == -1);
            for (int i = 0; ok && i < m.n(); ++i)
                for (int j2 = 0; j2 < m.n(); ++j2)
                    if (prod(i, j2) != (i == j2 ? cert.diag[static_cast<std::size_t>(i)] : Int(0))) {
                        ok = false;
                        break;
                    }
            for (int i = 0; ok && i + 1 < m.n(); ++i) {
                const Int& d = cert.diag[static_cast<std::size_t>(i)];
                const Int& e = cert.diag[static_cast<std::size_t>(i) + 1];
                if (d < 0 || e < 0 || (d == 0 && e != 0) || (e != 0 && e % d != 0)) ok = false;
            }
            if (!ok) {
                err << "error: certificate failed its own recheck\n";
                return 1;
            }
            json diag = json::array();
            for (const auto& d : cert.diag) diag.push_back(to_long_checked(d, "snf output"));
            emit(json{{"left", encode_intmat(cert.left)},
                      {"diag", std::move(diag)},
                      {"right", encode_intmat(cert.right)}},
                 out_path, out);
            return 0;
        }

        if (*c_mk) {
            ObjectFile f = load_object(in_a, "bundle");
            FactorizedBundle e = decode_bundle(f.payload, effective_tol(nullptr));
            err << "rank r' = " << e.rank.rprime << ", s = " << e.rank.s << "\n";
            emit(encode_object_file({"bundle", 1, encode_bundle(e)}), out_path, out);
            return 0;
        }

        if (*c_check) {
            ObjectFile f = load_object(in_a);
            TorusData torus = load_torus(torus_path);
            double tol = effective_tol(&torus);
            bool all_ok = true;
            auto report = [&](const char* name, bool ok) {
                out << name << ": " << (ok ? "ok" : "FAIL") << "\n";
                all_ok = all_ok && ok;
            };
            if (f.kind == "bundle") {
                LooseBundle b = decode_bundle_loose(f.payload);
                if (b.p.size() != torus.dim()) throw std::invalid_argument("check: torus dimension mismatch");
                bool unitary_ok = b.uset.order() == b.rank.rprime;
                for (const auto& m : b.uset.V) unitary_ok = unitary_ok && is_unitary(m, tol);
                for (const auto& m : b.uset.U) unitary_ok = unitary_ok && is_unitary(m, tol);
                report("unitary", unitary_ok);
                bool cocycle_ok = unitary_ok &&
                                  check_cocycle(b.uset, b.r,
                                                b.frame == UnitaryFrame::ambient ? b.A
                                                                                 : b.rank.divisor_matrix,
                                                tol);
                report("cocycle", cocycle_ok);
                report("holomorphic", is_holomorphic(b.A, torus, tol));
                report("brane-condition", is_brane(b.A, torus, tol));
                if (unitary_ok) {
                    std::tie(b.uset.xi, b.uset.theta) = det_phases(b.uset, tol);
                    out << "commutant-dimension: " << commutant_dimension(b.uset, tol) << "\n";
                }
                out << "rank: " << b.rank.rprime << "\n";
            } else if (f.kind == "brane") {
                LagrangianBrane l = decode_brane(f.payload);
                if (l.dim() != torus.dim()) throw std::invalid_argument("check: torus dimension mismatch");
                report("holomorphic", is_holomorphic(l.A, torus, tol));
                report("brane-condition", is_brane(l.A, torus, tol));
                out << "rank: " << l.rank.rprime << "\n";
            } else {
                throw std::invalid_argument("check: object must be a bundle or a brane");
            }
            return all_ok ? 0 : 1;
        }

        if (*c_iso) {
            ObjectFile fa = load_object(in_a);
            ObjectFile fb = load_object(in_b);
            if (fa.kind != fb.kind)
                throw std::invalid_argument("iso: object kinds differ (" + fa.kind + " vs " + fb.kind + ")");
            TorusData torus = load_torus(torus_path);
            double tol = effective_tol(&torus);
            if (fa.kind == "bundle") {
                FactorizedBundle e1 = decode_bundle(fa.payload, tol);
                FactorizedBundle e2 = decode_bundle(fb.payload, tol);
                BundleIsoReport rep = bundle_iso_report(e1, e2, torus, tol);
                out << (rep.isomorphic ? "isomorphic" : "not-isomorphic") << "\n";
                json wit{{"chern_mismatch", rep.chern_mismatch}};
                if (!rep.chern_mismatch) {
                    wit["alpha"] = encode_rvector(rep.alpha);
                    wit["beta"] = encode_rvector(rep.beta);
                    wit["membership_p"] = encode_rvector(rep.mem_p);
                    wit["membership_q"] = encode_rvector(rep.mem_q);
                }
                out << canonical_dump(wit) << "\n";
                return rep.isomorphic ? 0 : 1;
            }
            if (fa.kind == "brane") {
                LagrangianBrane l1 = decode_brane(fa.payload);
                LagrangianBrane l2 = decode_brane(fb.payload);
                if (!is_brane(l1.A, torus, tol) || !is_brane(l2.A, torus, tol))
                    throw std::invalid_argument("iso: brane object condition fails (AT != (AT)^t)");
                BraneIsoReport rep = brane_iso_report(l1, l2, tol);
                out << (rep.isomorphic ? "isomorphic" : "not-isomorphic") << "\n";
                json wit{{"chern_mismatch", rep.chern_mismatch}};
                if (!rep.chern_mismatch) {
                    wit["membership_p"] = encode_rvector(rep.mem_p);
                    wit["membership_q"] = encode_rvector(rep.mem_q);
                    if (rep.has_witness) {
                        json nvec = json::array();
                        for (Eigen::Index i = 0; i < rep.witness_n.size(); ++i)
                            nvec.push_back(rep.witness_n(i));
                        wit["holonomy_witness"] = std::move(nvec);
                    }
                }
                out << canonical_dump(wit) << "\n";
                return rep.isomorphic ? 0 : 1;
            }
            throw std::invalid_argument("iso: objects must be bundles or branes");
        }

        if (*c_mirror) {
            ObjectFile f = load_object(in_a, "bundle");
            TorusData torus = load_torus(torus_path);
            double tol = effective_tol(&torus);
            FactorizedBundle e = decode_bundle(f.payload, tol);
            if (!is_holomorphic(e.A, torus, tol)) {
                err << "error: holomorphicity check failed, AT != (AT)^t\n";
                return 1;
            }
            LagrangianBrane l = apply_functor(e, torus, tol);
            emit(encode_object_file({"brane", 1, encode_brane(l)}), out_path, out);
            return 0;
        }

        if (*c_naive) {
            ObjectFile f = load_object(in_a, "bundle");
            FactorizedBundle e = decode_bundle(f.payload, effective_tol(nullptr));
            emit(encode_object_file({"brane", 1, encode_brane(naive_map(e))}), out_path, out);
            return 0;
        }

        if (*c_invert) {
            ObjectFile f = load_object(in_a, "brane");
            LagrangianBrane l = decode_brane(f.payload);
            double tol = 1e-9;
            if (!torus_path.empty()) {
                TorusData torus = load_torus(torus_path);
                tol = effective_tol(&torus);
                if (!is_brane(l.A, torus, tol))
                    throw std::invalid_argument("invert: brane object condition fails (AT != (AT)^t)");
            } else if (tol_override > 0.0) {
                tol = tol_override;
            }
            FactorizedBundle e;
            if (uset_path.empty()) {
                e = inverse_representative(l);
            } else {
                json ju = load_json(uset_path);
                UnitarySet us;
                for (const auto& m : ju.at("V")) us.V.push_back(decode_cmatrix(m));
                for (const auto& m : ju.at("U")) us.U.push_back(decode_cmatrix(m));
                UnitaryFrame frame = ju.value("frame", std::string("ambient")) == "divisor"
                                         ? UnitaryFrame::divisor
                                         : UnitaryFrame::ambient;
                std::tie(us.xi, us.theta) = det_phases(us, tol);
                e = inverse_representative(l, std::move(us), frame, tol);
            }
            emit(encode_object_file({"bundle", 1, encode_bundle(e)}), out_path, out);
            return 0;
        }

        if (*c_verify) {
            ObjectFile f = load_object(in_a, "family");
            auto [fam, torus] = decode_family(f.payload, tol_override);
            double tol = effective_tol(&torus);
            IsoClassReport rep = verify_bijection(fam, torus, naive_family, tol);
            emit(encode_report(rep), out_path, out);
            err << "verdict: " << to_string(rep.verdict) << "\n";
            return rep.verdict == Verdict::bijection ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace hmstori

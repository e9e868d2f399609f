#pragma once

// The object-level mirror map
//   F(E_(r,A,r',U,p,q)) = L_(r,A, p - (r/r') theta, q + (r/r') xi),
// its inverse-representative construction, the parameter-forgetting map it
// repairs, and a finite-family certifier that the induced map on
// isomorphism classes is a bijection.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmstori/bundle.hpp"
#include "hmstori/io.hpp"
#include "hmstori/lagrangian.hpp"
#include "hmstori/torus.hpp"

namespace hmstori {

inline LagrangianBrane apply_functor(const FactorizedBundle& e, const TorusData& torus,
                                     double tol = 1e-9) {
    if (e.dim() != torus.dim()) throw std::invalid_argument("apply_functor: torus mismatch");
    if (!is_holomorphic(e.A, torus, tol))
        throw std::invalid_argument("apply_functor: bundle is not holomorphic (AT != (AT)^t)");
    auto [xi, theta] = ambient_phases(e);
    double rr = static_cast<double>(e.r) / static_cast<double>(e.rank.rprime);
    return make_brane(e.r, e.A, e.p - rr * theta, e.q + rr * xi);
}

/// Drops the unitary set entirely; kept so the harness can demonstrate that
/// the parameter-forgetting map fails to classify.
inline LagrangianBrane naive_map(const FactorizedBundle& e) {
    return make_brane(e.r, e.A, e.p, e.q);
}

/// A bundle whose functor image is isomorphic to the given brane:
/// parameters (p + (r/r') theta, q - (r/r') xi) for the chosen unitary set.
inline FactorizedBundle inverse_representative(const LagrangianBrane& l, UnitarySet uset,
                                               UnitaryFrame frame, double tol = 1e-9) {
    auto [xi, theta] = ambient_phases(uset, l.rank, frame);
    double rr = static_cast<double>(l.r) / static_cast<double>(l.rank.rprime);
    return make_bundle(l.r, l.A, l.p + rr * theta, l.q - rr * xi, std::move(uset), frame, tol);
}

inline FactorizedBundle inverse_representative(const LagrangianBrane& l) {
    UnitarySet us = standard_unitary_set(l.rank);
    auto [xi, theta] = ambient_phases(us, l.rank, UnitaryFrame::divisor);
    double rr = static_cast<double>(l.r) / static_cast<double>(l.rank.rprime);
    FactorizedBundle e;
    e.r = l.r;
    e.A = l.A;
    e.p = l.p + rr * theta;
    e.q = l.q - rr * xi;
    e.uset = std::move(us);
    e.frame = UnitaryFrame::divisor;
    e.rank = l.rank;
    return e;
}

/// Scalar phase twist applied to a standard set through tensor_line with
/// u = v = 0: V_j picks up e^{i tau_j}, U_k picks up e^{i sigma_k}.
struct PhaseTwist {
    Eigen::VectorXd tau;
    Eigen::VectorXd sigma;
};

struct FamilySpec {
    std::vector<std::pair<long, Eigen::MatrixXi>> pairs;  // primitive (r, A), holomorphic
    double grid_step = std::numbers::pi;                  // must be 2 pi / k
    std::vector<PhaseTwist> twists;                       // empty means the untwisted set only
};

enum class Verdict { bijection, not_injective, not_surjective, not_well_defined };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::bijection: return "bijection";
        case Verdict::not_injective: return "not_injective";
        case Verdict::not_surjective: return "not_surjective";
        case Verdict::not_well_defined: return "not_well_defined";
    }
    return "?";
}

struct IsoClassReport {
    // objects sorted lexicographically by canonical JSON encoding
    std::vector<std::string> bundle_ids;
    std::vector<std::string> brane_ids;
    std::vector<std::vector<int>> classes_bundle;
    std::vector<std::vector<int>> classes_brane;
    std::vector<int> bundle_class_of;       // object index -> class index
    std::vector<int> brane_class_of;
    std::vector<int> image_brane_of;        // bundle object index -> brane object index
    std::vector<std::pair<int, int>> map_table;  // bundle class -> brane class of first member image
    std::vector<int> grid_classes;          // brane classes containing a grid object
    Verdict verdict = Verdict::bijection;
    bool well_defined = true;
    bool injective = true;
    bool surjective = true;
    std::vector<std::pair<int, int>> witness_not_well_defined;  // bundle object index pairs
    std::vector<std::pair<int, int>> witness_not_injective;     // bundle object index pairs
    std::vector<int> witness_not_surjective;                    // brane object indices
};

namespace detail {

template <class Iso>
inline std::pair<std::vector<std::vector<int>>, std::vector<int>> partition_objects(int count,
                                                                                    Iso&& iso) {
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of(static_cast<std::size_t>(count), -1);
    for (int i = 0; i < count; ++i) {
        int found = -1;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (iso(i, classes[c].front())) {
                found = static_cast<int>(c);
                break;
            }
        }
        if (found < 0) {
            classes.push_back({i});
            found = static_cast<int>(classes.size()) - 1;
        } else {
            classes[static_cast<std::size_t>(found)].push_back(i);
        }
        class_of[static_cast<std::size_t>(i)] = found;
    }
    return {std::move(classes), std::move(class_of)};
}

}  // namespace detail

/// Runs the full certificate over the finite family: builds every bundle on
/// the (p, q) grid with every twist of the standard set, partitions both
/// sides into isomorphism classes, maps bundle classes through the functor
/// (or the parameter-forgetting map when use_naive), and checks
/// well-definedness, injectivity, and surjectivity onto the grid-generated
/// brane classes via inverse representatives.
inline IsoClassReport verify_bijection(const FamilySpec& fam, const TorusData& torus,
                                       bool use_naive = false, double tol = 1e-9) {
    if (fam.pairs.empty()) throw std::invalid_argument("verify_bijection: empty family");
    double k_real = two_pi / fam.grid_step;
    long k = std::lround(k_real);
    if (!(fam.grid_step > 0.0) || k < 1 || std::abs(k_real - static_cast<double>(k)) > 1e-9)
        throw std::invalid_argument("verify_bijection: grid_step must be 2 pi / k");
    for (const auto& [r, a] : fam.pairs) {
        if (!is_holomorphic(a, torus, tol))
            throw std::invalid_argument("verify_bijection: family pair is not holomorphic");
        Eigen::VectorXd z = Eigen::VectorXd::Zero(a.rows());
        if (primitive_form(r, a, z, z).k != 1)
            throw std::invalid_argument("verify_bijection: family pair is not primitive");
    }
    std::vector<PhaseTwist> twists = fam.twists;
    if (twists.empty()) {
        const int n = torus.dim();
        twists.push_back({Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)});
    }

    const int n = torus.dim();

    // enumerate the family: one bundle per (pair, grid p, grid q, twist)
    std::vector<FactorizedBundle> raw;
    for (const auto& [r, a] : fam.pairs) {
        const long per_axis = r * k;
        std::vector<double> grid(static_cast<std::size_t>(per_axis));
        for (long g = 0; g < per_axis; ++g)
            grid[static_cast<std::size_t>(g)] = static_cast<double>(g) * fam.grid_step;

        std::vector<long> digits(static_cast<std::size_t>(2 * n), 0);
        for (;;) {
            Eigen::VectorXd p(n), q(n);
            for (int i = 0; i < n; ++i) {
                p(i) = grid[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
                q(i) = grid[static_cast<std::size_t>(digits[static_cast<std::size_t>(n + i)])];
            }
            FactorizedBundle base = standard_bundle(r, a, p, q);
            for (const auto& tw : twists) {
                if (tw.tau.size() != n || tw.sigma.size() != n)
                    throw std::invalid_argument("verify_bijection: twist dimension mismatch");
                if (tw.tau.isZero(0.0) && tw.sigma.isZero(0.0))
                    raw.push_back(base);
                else
                    raw.push_back(tensor_line(base, tw.tau, tw.sigma, Eigen::VectorXd::Zero(n),
                                              Eigen::VectorXd::Zero(n)));
            }
            int pos = 0;
            while (pos < 2 * n) {
                if (++digits[static_cast<std::size_t>(pos)] < per_axis) break;
                digits[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos >= 2 * n) break;
        }
    }

    IsoClassReport rep;

    // deterministic order: sort by canonical encoding, drop exact duplicates
    std::vector<FactorizedBundle> bundles;
    {
        std::map<std::string, FactorizedBundle> by_id;
        for (auto& e : raw) by_id.emplace(canonical_dump(encode_bundle(e)), std::move(e));
        for (auto& [id, e] : by_id) {
            rep.bundle_ids.push_back(id);
            bundles.push_back(std::move(e));
        }
    }

    // brane objects: the same grid, plus every functor image
    std::vector<LagrangianBrane> branes;
    std::vector<bool> brane_is_grid;
    std::map<std::string, int> brane_index;
    auto intern_brane = [&](const LagrangianBrane& l, bool grid) {
        std::string id = canonical_dump(encode_brane(l));
        auto it = brane_index.find(id);
        if (it != brane_index.end()) {
            if (grid) brane_is_grid[static_cast<std::size_t>(it->second)] = true;
            return it->second;
        }
        int idx = static_cast<int>(branes.size());
        brane_index.emplace(std::move(id), idx);
        branes.push_back(l);
        brane_is_grid.push_back(grid);
        return idx;
    };

    for (const auto& [r, a] : fam.pairs) {
        const long per_axis = r * k;
        std::vector<long> digits(static_cast<std::size_t>(2 * n), 0);
        for (;;) {
            Eigen::VectorXd p(n), q(n);
            for (int i = 0; i < n; ++i) {
                p(i) = static_cast<double>(digits[static_cast<std::size_t>(i)]) * fam.grid_step;
                q(i) = static_cast<double>(digits[static_cast<std::size_t>(n + i)]) * fam.grid_step;
            }
            intern_brane(make_brane(r, a, p, q), true);
            int pos = 0;
            while (pos < 2 * n) {
                if (++digits[static_cast<std::size_t>(pos)] < per_axis) break;
                digits[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos >= 2 * n) break;
        }
    }
    rep.image_brane_of.resize(bundles.size());
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        LagrangianBrane img =
            use_naive ? naive_map(bundles[i]) : apply_functor(bundles[i], torus, tol);
        rep.image_brane_of[i] = intern_brane(img, false);
    }

    // reorder branes lexicographically by encoding
    {
        std::vector<int> order(branes.size());
        for (std::size_t i = 0; i < branes.size(); ++i) order[i] = static_cast<int>(i);
        std::vector<std::string> ids(branes.size());
        for (const auto& [id, idx] : brane_index) ids[static_cast<std::size_t>(idx)] = id;
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return ids[static_cast<std::size_t>(x)] < ids[static_cast<std::size_t>(y)]; });
        std::vector<int> newpos(branes.size());
        std::vector<LagrangianBrane> sorted;
        std::vector<bool> sorted_grid;
        for (std::size_t i = 0; i < order.size(); ++i) {
            newpos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
            sorted.push_back(std::move(branes[static_cast<std::size_t>(order[i])]));
            sorted_grid.push_back(brane_is_grid[static_cast<std::size_t>(order[i])]);
            rep.brane_ids.push_back(ids[static_cast<std::size_t>(order[i])]);
        }
        branes = std::move(sorted);
        brane_is_grid = std::move(sorted_grid);
        for (auto& idx : rep.image_brane_of) idx = newpos[static_cast<std::size_t>(idx)];
    }

    // isomorphism-class partitions on both sides
    std::tie(rep.classes_bundle, rep.bundle_class_of) =
        detail::partition_objects(static_cast<int>(bundles.size()), [&](int x, int y) {
            return bundle_iso(bundles[static_cast<std::size_t>(x)], bundles[static_cast<std::size_t>(y)], torus, tol);
        });
    std::tie(rep.classes_brane, rep.brane_class_of) =
        detail::partition_objects(static_cast<int>(branes.size()), [&](int x, int y) {
            return brane_iso(branes[static_cast<std::size_t>(x)], branes[static_cast<std::size_t>(y)], tol);
        });

    // induced map on classes; well-definedness = one image class per bundle class
    for (const auto& cls : rep.classes_bundle) {
        int img0 = rep.brane_class_of[static_cast<std::size_t>(rep.image_brane_of[static_cast<std::size_t>(cls.front())])];
        rep.map_table.emplace_back(rep.bundle_class_of[static_cast<std::size_t>(cls.front())], img0);
        for (std::size_t i = 1; i < cls.size(); ++i) {
            int img = rep.brane_class_of[static_cast<std::size_t>(rep.image_brane_of[static_cast<std::size_t>(cls[i])])];
            if (img != img0) {
                rep.well_defined = false;
                rep.witness_not_well_defined.emplace_back(cls.front(), cls[i]);
                break;
            }
        }
    }

    // injectivity: distinct bundle classes may not share an image class
    {
        std::map<int, int> image_owner;  // brane class -> bundle object first mapped onto it
        for (const auto& cls : rep.classes_bundle) {
            for (int member : cls) {
                int img = rep.brane_class_of[static_cast<std::size_t>(rep.image_brane_of[static_cast<std::size_t>(member)])];
                auto [it, inserted] = image_owner.try_emplace(img, member);
                if (!inserted && rep.bundle_class_of[static_cast<std::size_t>(it->second)] !=
                                     rep.bundle_class_of[static_cast<std::size_t>(member)]) {
                    rep.injective = false;
                    rep.witness_not_injective.emplace_back(it->second, member);
                }
            }
        }
    }

    // surjectivity onto grid-generated brane classes, through the inverse
    // representative round trip
    for (std::size_t c = 0; c < rep.classes_brane.size(); ++c) {
        int grid_member = -1;
        for (int member : rep.classes_brane[c])
            if (brane_is_grid[static_cast<std::size_t>(member)]) { grid_member = member; break; }
        if (grid_member < 0) continue;
        rep.grid_classes.push_back(static_cast<int>(c));
        const LagrangianBrane& l = branes[static_cast<std::size_t>(grid_member)];
        FactorizedBundle inv = inverse_representative(l);
        LagrangianBrane round =
            use_naive ? naive_map(inv) : apply_functor(inv, torus, tol);
        if (!brane_iso(round, l, tol)) {
            rep.surjective = false;
            rep.witness_not_surjective.push_back(grid_member);
        }
    }

    if (!rep.injective)
        rep.verdict = Verdict::not_injective;
    else if (!rep.well_defined)
        rep.verdict = Verdict::not_well_defined;
    else if (!rep.surjective)
        rep.verdict = Verdict::not_surjective;
    else
        rep.verdict = Verdict::bijection;
    return rep;
}

// ---- JSON codecs for family specs and reports ----

inline json encode_family(const FamilySpec& fam, const TorusData& torus) {
    json pairs = json::array();
    for (const auto& [r, a] : fam.pairs) pairs.push_back(json{{"r", r}, {"A", encode_imatrix(a)}});
    json twists = json::array();
    for (const auto& tw : fam.twists)
        twists.push_back(json{{"tau", encode_rvector(tw.tau)}, {"sigma", encode_rvector(tw.sigma)}});
    return json{{"torus", encode_torus(torus)},
                {"pairs", std::move(pairs)},
                {"grid_step", fam.grid_step},
                {"twists", std::move(twists)}};
}

inline std::pair<FamilySpec, TorusData> decode_family(const json& j, double tol_override = -1.0) {
    if (!j.is_object() || !j.contains("torus") || !j.contains("pairs") || !j.contains("grid_step"))
        throw std::invalid_argument("family payload needs torus, pairs, grid_step");
    TorusData torus = decode_torus(j["torus"], tol_override);
    FamilySpec fam;
    fam.grid_step = j["grid_step"].get<double>();
    for (const auto& pr : j["pairs"]) {
        if (!pr.is_object() || !pr.contains("r") || !pr.contains("A"))
            throw std::invalid_argument("family pair needs r and A");
        fam.pairs.emplace_back(pr["r"].get<long>(), decode_imatrix(pr["A"]));
    }
    if (j.contains("twists"))
        for (const auto& tw : j["twists"])
            fam.twists.push_back({decode_rvector(tw.at("tau")), decode_rvector(tw.at("sigma"))});
    return {std::move(fam), std::move(torus)};
}

inline json encode_report(const IsoClassReport& rep) {
    json objs_bundle = json::array(), objs_brane = json::array();
    for (const auto& id : rep.bundle_ids) objs_bundle.push_back(json::parse(id));
    for (const auto& id : rep.brane_ids) objs_brane.push_back(json::parse(id));
    json classes_bundle = json::array(), classes_brane = json::array();
    for (const auto& c : rep.classes_bundle) classes_bundle.push_back(c);
    for (const auto& c : rep.classes_brane) classes_brane.push_back(c);
    json map = json::array();
    for (const auto& [b, l] : rep.map_table) map.push_back(json::array({b, l}));
    json wit_wd = json::array(), wit_inj = json::array();
    for (const auto& [x, y] : rep.witness_not_well_defined) wit_wd.push_back(json::array({x, y}));
    for (const auto& [x, y] : rep.witness_not_injective) wit_inj.push_back(json::array({x, y}));
    return json{{"classes_bundle", std::move(classes_bundle)},
                {"classes_brane", std::move(classes_brane)},
                {"map", std::move(map)},
                {"verdict", to_string(rep.verdict)},
                {"witnesses",
                 json{{"not_well_defined", std::move(wit_wd)},
                      {"not_injective", std::move(wit_inj)},
                      {"not_surjective", rep.witness_not_surjective}}},
                {"grid_classes", rep.grid_classes},
                {"objects_bundle", std::move(objs_bundle)},
                {"objects_brane", std::move(objs_brane)}};
}

}  // namespace hmstori

#pragma once

// JSON persistence. Complex scalars are encoded as [re, im] pairs, matrices
// as row-major nested arrays. canonical_dump produces byte-stable output:
// sorted keys, floats printed with 17 significant digits.

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "hmstori/bundle.hpp"
#include "hmstori/lagrangian.hpp"
#include "hmstori/torus.hpp"

namespace hmstori {

using json = nlohmann::json;

// ---- canonical serialization ----

namespace detail {

inline void canonical_append(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) throw std::invalid_argument("canonical_dump: non-finite number");
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
            break;
        }
        case json::value_t::string:
            out += json(j.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ',';
                first = false;
                canonical_append(el, out);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate key-sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                canonical_append(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            throw std::invalid_argument("canonical_dump: unsupported value type");
    }
}

}  // namespace detail

inline std::string canonical_dump(const json& j) {
    std::string out;
    detail::canonical_append(j, out);
    return out;
}

// ---- scalar / matrix codecs ----

inline json encode_complex(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::complex<double> decode_complex(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("expected complex scalar as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json encode_cmatrix(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode_complex(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXcd decode_cmatrix(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected non-empty matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            throw std::invalid_argument("ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = decode_complex(j[i][c]);
    }
    return m;
}

inline json encode_imatrix(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXi decode_imatrix(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected non-empty integer matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXi m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            throw std::invalid_argument("ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!j[i][c].is_number_integer())
                throw std::invalid_argument("integer matrix entry is not an integer");
            m(i, c) = j[i][c].get<int>();
        }
    }
    return m;
}

inline json encode_rvector(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline Eigen::VectorXd decode_rvector(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected real vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!j[i].is_number()) throw std::invalid_argument("vector entry is not a number");
        v(i) = j[i].get<double>();
    }
    return v;
}

// ---- domain objects ----

inline json encode_torus(const TorusData& t) {
    return json{{"T", encode_cmatrix(t.T)}, {"tol", t.tol}};
}

inline TorusData decode_torus(const json& j, double tol_override = -1.0) {
    if (!j.is_object() || !j.contains("T")) throw std::invalid_argument("torus payload needs a \"T\" field");
    double tol = 1e-9;
    if (j.contains("tol")) tol = j["tol"].get<double>();
    if (tol_override > 0.0) tol = tol_override;
    return make_torus(decode_cmatrix(j["T"]), tol);
}

inline json encode_unitary_set(const UnitarySet& u, UnitaryFrame frame) {
    json vs = json::array(), us = json::array();
    for (const auto& m : u.V) vs.push_back(encode_cmatrix(m));
    for (const auto& m : u.U) us.push_back(encode_cmatrix(m));
    return json{{"V", std::move(vs)},
                {"U", std::move(us)},
                {"frame", frame == UnitaryFrame::ambient ? "ambient" : "divisor"}};
}

inline json encode_bundle(const FactorizedBundle& e) {
    return json{{"r", e.r},
                {"A", encode_imatrix(e.A)},
                {"p", encode_rvector(e.p)},
                {"q", encode_rvector(e.q)},
                {"U", encode_unitary_set(e.uset, e.frame)}};
}

inline FactorizedBundle decode_bundle(const json& j, double tol = 1e-9) {
    if (!j.is_object() || !j.contains("r") || !j.contains("A") || !j.contains("p") || !j.contains("q"))
        throw std::invalid_argument("bundle payload needs r, A, p, q");
    long r = j["r"].get<long>();
    Eigen::MatrixXi a = decode_imatrix(j["A"]);
    Eigen::VectorXd p = decode_rvector(j["p"]);
    Eigen::VectorXd q = decode_rvector(j["q"]);
    if (!j.contains("U")) return standard_bundle(r, a, p, q);

    const json& ju = j["U"];
    if (!ju.is_object() || !ju.contains("V") || !ju.contains("U"))
        throw std::invalid_argument("bundle \"U\" field needs V and U matrix lists");
    UnitarySet us;
    for (const auto& m : ju["V"]) us.V.push_back(decode_cmatrix(m));
    for (const auto& m : ju["U"]) us.U.push_back(decode_cmatrix(m));
    UnitaryFrame frame = UnitaryFrame::ambient;
    if (ju.contains("frame")) {
        std::string f = ju["frame"].get<std::string>();
        if (f == "divisor")
            frame = UnitaryFrame::divisor;
        else if (f != "ambient")
            throw std::invalid_argument("bundle frame must be \"ambient\" or \"divisor\"");
    }
    return make_bundle(r, a, p, q, std::move(us), frame, tol);
}

inline json encode_brane(const LagrangianBrane& l) {
    return json{{"r", l.r},
                {"A", encode_imatrix(l.A)},
                {"p", encode_rvector(l.p)},
                {"q", encode_rvector(l.q)}};
}

inline LagrangianBrane decode_brane(const json& j) {
    if (!j.is_object() || !j.contains("r") || !j.contains("A") || !j.contains("p") || !j.contains("q"))
        throw std::invalid_argument("brane payload needs r, A, p, q");
    return make_brane(j["r"].get<long>(), decode_imatrix(j["A"]), decode_rvector(j["p"]),
                      decode_rvector(j["q"]));
}

// ---- object files ----

struct ObjectFile {
    std::string kind;  // torus | bundle | brane | family
    int schema_version = 1;
    json payload;
};

inline json encode_object_file(const ObjectFile& f) {
    return json{{"kind", f.kind}, {"schema_version", f.schema_version}, {"payload", f.payload}};
}

inline ObjectFile decode_object_file(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("payload"))
        throw std::invalid_argument("object file needs kind and payload");
    ObjectFile f;
    f.kind = j["kind"].get<std::string>();
    if (f.kind != "torus" && f.kind != "bundle" && f.kind != "brane" && f.kind != "family")
        throw std::invalid_argument("unknown object kind: " + f.kind);
    f.schema_version = j.value("schema_version", 1);
    if (f.schema_version != 1) throw std::invalid_argument("unsupported schema_version");
    f.payload = j["payload"];
    return f;
}

}  // namespace hmstori

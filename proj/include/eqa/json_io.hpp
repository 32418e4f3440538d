#pragma once

#include <json.hpp>

#include "eqa/flow.hpp"
#include "eqa/invariants.hpp"
#include "eqa/ruled.hpp"

// JSON views of the public records. Key names are part of the output
// contract; numbers serialize as IEEE doubles in shortest round-trip form.

namespace eqa {

inline nlohmann::json to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline nlohmann::json to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json to_json(const Inertia& in) {
    return {{"positive", in.positive}, {"negative", in.negative}, {"zero", in.zero}};
}

inline nlohmann::json to_json(const InvariantReport& r) {
    nlohmann::json j;
    j["point"] = to_json(r.point);
    j["F"] = r.F;
    j["dF"] = to_json(r.dF);
    j["hess"] = to_json(r.hess.mat());
    j["H"] = r.H;
    j["U"] = to_json(r.U.mat());
    j["N"] = to_json(r.N);
    j["Ucal"] = r.Ucal;
    j["gauss_kronecker"] = r.gauss_kronecker;
    j["flags"] = {{"regular_point", r.flags.regular_point},
                  {"nondegenerate", r.flags.nondegenerate},
                  {"Ucal_sign", r.flags.ucal_sign}};
    if (r.normal) {
        const auto& nd = *r.normal;
        j["k"] = to_json(nd.k.mat());
        j["k_inv"] = to_json(nd.k_inv.mat());
        j["k_inertia"] = to_json(nd.inertia_k);
        j["sff"] = to_json(nd.sff.mat());
        j["sff_inv"] = to_json(nd.sff_inv.mat());
        j["mu"] = to_json(nd.mu);
        j["nm"] = to_json(nd.nm);
        j["rho"] = to_json(nd.rho);
        j["S"] = to_json(nd.S);
        j["kappa_eq"] = nd.kappa_eq;
        j["kappa_eq_div"] = nd.kappa_eq_div;
    }
    return j;
}

inline nlohmann::json to_json(const CentroaffineImmersion& imm, double kappa, double dev) {
    nlohmann::json j;
    j["n"] = imm.n;
    j["name"] = imm.name;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : imm.components) comps.push_back(c.printable() ? c.printed() : "?");
    j["components"] = comps;
    j["domain"] = {{"lo", to_json(imm.domain.lo)}, {"hi", to_json(imm.domain.hi)}};
    j["kappa"] = kappa;
    j["kappa_dev"] = dev;
    return j;
}

inline nlohmann::json to_json(const RuledField& rf) {
    nlohmann::json j = to_json(rf.immersion, rf.kappa, rf.kappa_dev);
    j["Q"] = pretty(rf.q, rf.field.var_names);  // Q references the ruling variables
    j["field"] = rf.field.printable() ? rf.field.printed() : "?";
    return j;
}

inline nlohmann::json to_json(const Trajectory& t) {
    nlohmann::json j;
    j["times"] = t.times;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : t.points) pts.push_back(to_json(p));
    j["points"] = pts;
    j["F_values"] = t.F_values;
    j["stop_reason"] = t.stop_reason;
    return j;
}

}  // namespace eqa

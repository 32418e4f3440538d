#include "eqa/flow.hpp"

#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

namespace {

/// nm at a point, or a stop reason.
struct StageEval {
    Eigen::VectorXd nm;
    std::string stop;
};

StageEval eval_nm(const FieldSpec& field, const Eigen::VectorXd& p, const Tols& tols) {
    StageEval out;
    InvariantReport r = analyze(field, p, tols);
    if (!r.flags.regular_point) {
        out.stop = "critical-point";
        return out;
    }
    if (!r.flags.nondegenerate) {
        out.stop = "degenerate";
        return out;
    }
    out.nm = r.normal->nm;
    return out;
}

}  // namespace

Trajectory integrate(const FieldSpec& field, const Eigen::VectorXd& start, double t_end,
                     int steps, const Tols& tols) {
    if (steps < 1) throw ArgumentError("integrate: steps must be >= 1");
    Trajectory traj;
    {
        InvariantReport r = analyze(field, start, tols);
        if (!r.flags.regular_point) throw CriticalPointError("integrate: critical start point");
        if (!r.flags.nondegenerate) throw DegenerateError("integrate: degenerate start point");
        traj.times.push_back(0.0);
        traj.points.push_back(start);
        traj.F_values.push_back(r.F);
    }
    if (t_end == 0.0) return traj;

    const double h = t_end / steps;
    Eigen::VectorXd x = start;
    for (int k = 0; k < steps; ++k) {
        auto s1 = eval_nm(field, x, tols);
        if (!s1.stop.empty()) {
            traj.stop_reason = s1.stop;
            return traj;
        }
        auto s2 = eval_nm(field, x + 0.5 * h * s1.nm, tols);
        if (!s2.stop.empty()) {
            traj.stop_reason = s2.stop;
            return traj;
        }
        auto s3 = eval_nm(field, x + 0.5 * h * s2.nm, tols);
        if (!s3.stop.empty()) {
            traj.stop_reason = s3.stop;
            return traj;
        }
        auto s4 = eval_nm(field, x + h * s3.nm, tols);
        if (!s4.stop.empty()) {
            traj.stop_reason = s4.stop;
            return traj;
        }
        x = x + (h / 6.0) * (s1.nm + 2.0 * s2.nm + 2.0 * s3.nm + s4.nm);

        InvariantReport r = analyze(field, x, tols);
        if (!r.flags.regular_point || !r.flags.nondegenerate) {
            traj.stop_reason = r.flags.regular_point ? "degenerate" : "critical-point";
            return traj;
        }
        traj.times.push_back((k + 1) * h);
        traj.points.push_back(x);
        traj.F_values.push_back(r.F);
    }
    return traj;
}

Eigen::VectorXd exact_ruled_flow(const RuledField& rf, double t, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& s) {
    const int n = rf.n();
    const double rate = std::pow(std::abs(rf.kappa), 2.0 / (n + 2));
    return level_parameterization(rf, -rate * t, r, s);
}

FlowReport flow_report(const FieldSpec& field, const std::vector<Eigen::VectorXd>& starts,
                       double t_end, int steps, const Tols& tols) {
    FlowReport rep;
    const int n = field.dim - 1;
    for (const auto& start : starts) {
        const double ucal0 = analyze(field, start, tols).Ucal;
        const double rate = std::pow(std::abs(ucal0), 1.0 / (n + 2));

        Trajectory traj = integrate(field, start, t_end, steps, tols);
        if (traj.truncated()) {
            rep.truncated_count += 1;
            continue;
        }
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double resid =
                std::abs(traj.F_values[k] - traj.F_values[0] + rate * traj.times[k]);
            rep.max_linearity_residual = std::max(rep.max_linearity_residual, resid);
        }

        // Richardson order estimate from step halving at the endpoint
        Trajectory t2 = integrate(field, start, t_end, 2 * steps, tols);
        Trajectory t4 = integrate(field, start, t_end, 4 * steps, tols);
        if (!t2.truncated() && !t4.truncated()) {
            const double e1 = (traj.points.back() - t2.points.back()).norm();
            const double e2 = (t2.points.back() - t4.points.back()).norm();
            const double floor = 1e-12 * (1.0 + traj.points.back().norm());
            if (e1 > floor && e2 > floor) {
                rep.convergence_order = std::max(rep.convergence_order, std::log2(e1 / e2));
                rep.order_measurable = true;
            }
        }
    }
    return rep;
}

}  // namespace eqa

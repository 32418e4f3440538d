#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "eqa/invariants.hpp"
#include "eqa/ruled.hpp"

namespace eqa {

/// A discrete solution of d phi/dt = nm(phi).
struct Trajectory {
    std::vector<double> times;            // strictly monotone
    std::vector<Eigen::VectorXd> points;  // one ambient point per node
    std::vector<double> F_values;
    std::string stop_reason;  // empty when the full horizon was reached
    bool truncated() const { return !stop_reason.empty(); }
};

/// Classical fixed-step RK4 on the equiaffine normal field. Stops early with
/// a reason code if a stage leaves the regular nondegenerate region.
Trajectory integrate(const FieldSpec& field, const Eigen::VectorXd& start, double t_end,
                     int steps, const Tols& tols = {});

/// Closed-form affine normal flow of a calibrated ruled field:
/// phi(t, r, s) = Phi(-|kappa|^{2/(n+2)} t, r, s).
Eigen::VectorXd exact_ruled_flow(const RuledField& rf, double t, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& s);

struct FlowReport {
    double max_linearity_residual = 0.0;  // F(phi(t)) - F(start) + |U|^{1/(n+2)} t
    double convergence_order = 0.0;       // Richardson estimate from step halving
    // Ruled flows are affine in t, so RK4 reproduces them to rounding and the
    // Richardson quotient is noise; `order_measurable` is false in that case.
    bool order_measurable = false;
    int truncated_count = 0;
};
FlowReport flow_report(const FieldSpec& field, const std::vector<Eigen::VectorXd>& starts,
                       double t_end, int steps, const Tols& tols = {});

}  // namespace eqa

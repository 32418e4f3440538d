#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "eqa/field.hpp"
#include "eqa/invariants.hpp"

namespace eqa {

/// Axis-aligned sampling box.
struct Box {
    Eigen::VectorXd lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    static Box centered(int dim, double half_width) {
        Box b;
        b.lo = Eigen::VectorXd::Constant(dim, -half_width);
        b.hi = Eigen::VectorXd::Constant(dim, half_width);
        return b;
    }
};

/// A map A: M subset R^n -> R^{n+1} with expression components, evaluable as
/// jets. Calibrated instances have det[A | dA] equal to a constant kappa.
struct CentroaffineImmersion {
    int n = 0;                         // domain dimension
    std::vector<FieldSpec> components; // n+1 scalar fields on R^n
    Box domain;
    std::string name;

    Eigen::VectorXd value(const Eigen::VectorXd& u) const;
    /// components and first derivatives: rows = components, cols = d/du^I
    Eigen::MatrixXd differential(const Eigen::VectorXd& u) const;
    /// det[A | dA] at u
    double ada_determinant(const Eigen::VectorXd& u) const;
    /// signed minors dA^{(i)} (delete row i), i = 0..n
    Eigen::VectorXd minors(const Eigen::VectorXd& u) const;
};

struct Calibration {
    double kappa = 0.0;    // mean of det[A | dA] over the samples
    double max_dev = 0.0;  // max relative deviation from the mean
    bool calibrated() const { return max_dev <= 1e-9; }
};

/// n = 1 immersion t -> (a(t), b(t)); kappa = a b' - a' b is constant exactly
/// when a, b solve a common second-order linear ODE.
CentroaffineImmersion wronskian_pair(const Ast& a, const Ast& b, Box domain = Box::centered(1, 2.0));

/// Lift B: M subset R^{n-1} -> R^n to A(t, u) = (a(t) B(u c(t)), b(t)).
/// Components must be expression-backed; the measured |A dA| decides
/// calibration, the formula (-1)^n kappa (a b' - a' b) a^{n-1} c^{n-1} only
/// predicts its magnitude.
CentroaffineImmersion extension_lift(const CentroaffineImmersion& b_imm, const Ast& a,
                                     const Ast& b, const Ast& c,
                                     std::optional<Box> domain = std::nullopt);

Calibration calibrate_kappa(const CentroaffineImmersion& a,
                            const std::vector<Eigen::VectorXd>& samples);

/// Named immersions used by the examples and the CLI:
/// circle (sin t, cos t); exp (e^{-t}, -e^t); ahelic (the sech/cos lift);
/// coshlift (cosh/sinh lift of the circle); sphere_strip (calibrated sphere
/// chart); sphere_polar (uncalibrated polar chart); graph_g (a^1 = g + kappa0,
/// a^{i+1} = u^i).
CentroaffineImmersion make_immersion(const std::string& name,
                                     const std::vector<std::string>& params = {});

/// F(u, x) = <A(u), x> + Q(u) on R^{2n+1}, coordinates (u^1..u^n, x_1..x_{n+1}).
struct RuledField {
    CentroaffineImmersion immersion;
    Ast q;                  // over the n domain variables
    FieldSpec field;        // the induced scalar field
    double kappa = 0.0;     // measured det[A | dA]
    double kappa_dev = 0.0; // measured deviation

    int n() const { return immersion.n; }
    int ambient_dim() const { return 2 * immersion.n + 1; }
};

RuledField build_ruled_field(const CentroaffineImmersion& a, const Ast& q, int samples = 64,
                             unsigned seed = 2026);

/// The ruling/radical vector field V = sum (-1)^{i+1} dA^{(i)} d_{x_i},
/// returned as an ambient (2n+1)-vector (u-components vanish).
Eigen::VectorXd v_field(const RuledField& rf, const Eigen::VectorXd& point);

/// Basis of the ruling distribution at u: vectors in the x-block that
/// annihilate A(u). Uses the tridiagonal frame Y_I = a^{I+1} d_{x_I} -
/// a^I d_{x_{I+1}} when well-conditioned, a pivoted nullspace basis otherwise.
Eigen::MatrixXd ruling_frame(const RuledField& rf, const Eigen::VectorXd& u);

struct ContactReport {
    double contact_residual = 0.0;   // beta ^ (dbeta)^n vs (-1)^{n(n+1)/2} n! kappa
    double reeb_pairing = 0.0;       // |beta(V) - kappa|
    double reeb_contraction = 0.0;   // || i_V dbeta ||
    double lagrangian_residual = 0.0;  // max |dbeta(T_I, T_J)|
    int max_symplectic_nullity = 0;  // nullity of dbeta restricted to T(level set)
};
ContactReport contact_symplectic_check(const RuledField& rf,
                                       const std::vector<Eigen::VectorXd>& points);

/// Phi(t, r, s): ambient point with F(Phi) = t, built from the ruling frame
/// and the radical direction.
Eigen::VectorXd level_parameterization(const RuledField& rf, double t, const Eigen::VectorXd& r,
                                       const Eigen::VectorXd& s);

struct AffineSphereVerdict {
    bool affine_sphere = false;
    double v_variation = 0.0;  // max pairwise deviation of V over the samples
    Eigen::VectorXd hyperplane_functional;  // the constant V, when constant
};
AffineSphereVerdict affine_sphere_test(const CentroaffineImmersion& a,
                                       const std::vector<Eigen::VectorXd>& samples);

struct RuledSuiteReport {
    double max_kappa_eq = 0.0;          // |equiaffine mean curvature|
    double max_nm_residual = 0.0;       // nm vs -sign(kappa)|kappa|^{-n/(n+2)} V
    double max_s_squared = 0.0;         // ||S^2||
    double max_ruling_in_ker_s = 0.0;   // ||S T_I||
    double max_ruling_isotropy = 0.0;   // |k(T_I, T_J)|
    double max_radical_residual = 0.0;  // ||Hess F . V||
    double max_adjugate_residual = 0.0; // ||adj Hess F - (-1)^n V (x) V||
    double max_ucal_residual = 0.0;     // |Ucal - (-1)^n kappa^2|
    bool split_signature = true;        // inertia_k == (n, n, 0) everywhere
    bool hessian_nullity_one = true;    // rank 2n everywhere
};
RuledSuiteReport ruled_invariant_suite(const RuledField& rf,
                                       const std::vector<Eigen::VectorXd>& points,
                                       const Tols& tols = {});

}  // namespace eqa

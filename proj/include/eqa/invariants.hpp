#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "eqa/field.hpp"
#include "eqa/forms.hpp"
#include "eqa/pipeline.hpp"

namespace eqa {

/// Everything the normal direction carries at a nondegenerate point.
struct NormalData {
    SymForm sff;          // sff_{ij}
    ContraForm sff_inv;   // sff^{ij}
    SymForm k;            // equiaffine metric k_{ij}
    ContraForm k_inv;     // k^{ij}
    Eigen::VectorXd mu;   // (n+2)^{-1} d log U(F)
    Eigen::VectorXd nm;   // equiaffine normal
    Eigen::VectorXd rho;  // equiaffine conormal
    Eigen::VectorXd Z;    // U(F) sff^{ip} mu_p
    Eigen::MatrixXd S;    // shape operator, S(i,j) = S_i^j (row = lower index)
    double kappa_eq = 0.0;      // (1/n) trace S
    double kappa_eq_div = 0.0;  // divergence-form route for the same quantity
    Inertia inertia_k;          // inertia of k restricted to the tangent space

    // diagnostics
    double shape_kernel_residual = 0.0;   // max |S_i^p F_p|
    double dethrho_residual = 0.0;        // det(grad rho) vs its closed form
    double alignment_residual = 0.0;      // classical normalization of the normal
};

struct InvariantReport {
    Eigen::VectorXd point;
    double F = 0.0;
    Eigen::VectorXd dF;
    SymForm hess;
    double H = 0.0;
    ContraForm U;
    Eigen::VectorXd N;
    double Ucal = 0.0;
    double gauss_kronecker = 0.0;  // Ucal / |dF|^{n+2}, when regular

    struct Flags {
        bool regular_point = false;
        bool nondegenerate = false;
        int ucal_sign = 0;
    } flags;

    std::optional<NormalData> normal;  // absent at degenerate or critical points
};

/// Full pointwise analysis. Critical or degenerate points yield a partial
/// report with `flags` set and `normal` absent; operations that cannot
/// proceed without a regular nondegenerate point throw instead.
InvariantReport analyze(const FieldSpec& field, const Eigen::VectorXd& point,
                        const Tols& tols = {});

double hessian_determinant(const FieldSpec& field, const Eigen::VectorXd& point);

struct UInvariant {
    double Ucal;
    Eigen::VectorXd N;
    ContraForm U;
};
UInvariant u_invariant(const FieldSpec& field, const Eigen::VectorXd& point);

/// Residuals of the positive-homogeneity identities
/// (lambda-1) U(F) = lambda H(F) F and (lambda-1) N = H(F) * x.
struct HomogeneityResidual {
    double scalar_identity;
    double euler_identity;
};
HomogeneityResidual homogeneity_check(const FieldSpec& field, const Eigen::VectorXd& point,
                                      double lambda);

/// Pointwise record of how the invariants transform under an external
/// reparameterization psi (an expression in one variable named t).
struct ReparamRecord {
    double psi_dot;
    double ucal_residual;  // U(psi o F) = psi'^{n+2} U(F)
    double h_residual;     // H(psi o F) = psi'^{n+1}(H + (psi''/psi') U)
    double n_residual;     // N~ = psi'^{n+1} N
    double nm_residual;    // nm(psi o F) = sign(psi') nm(F)
};
ReparamRecord reparam_transform(const FieldSpec& field, const Ast& psi,
                                const Eigen::VectorXd& point, const Tols& tols = {});

/// Pointwise record of affine equivariance under x -> a x + b.
struct AffineRecord {
    double det_linear;
    double h_residual;     // H(F)(g^{-1}x) = det^2 l(g) H(g.F)(x)
    double ucal_residual;  // same shape for U(F)
    double nm_residual;    // l(g) nm_F(g^{-1}x) = |det l(g)|^{2/(n+2)} nm_{g.F}(x)
};
AffineRecord affine_transform(const FieldSpec& field, const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, const Eigen::VectorXd& point,
                              const Tols& tols = {});

/// Projective covariance: U(F o Phi) = (det TPhi)^2 U(F) o Phi for the
/// fractional-linear map Phi(x) = (a x + b) / (c.x + d).
double projective_residual(const FieldSpec& field, const Eigen::MatrixXd& a,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& c, double d,
                           const Eigen::VectorXd& point, const Tols& tols = {});

/// Reilly's normalizer G = |U(F)|^{-1/(n+2)} (F - F(point)); |U(G)| = 1 along
/// the level set of F through `point`. Evaluable to jet order 2.
FieldSpec reilly_normalize(const FieldSpec& field, const Eigen::VectorXd& point,
                           const Tols& tols = {});

struct FlatnessReport {
    double max_wedge = 0.0;          // || mu ^ rho ||
    double max_nm_vs_n = 0.0;        // || nm + sign(U)|U|^{-(n+1)/(n+2)} N ||
    double max_namc_residual = 0.0;  // closed-form amc vs kappa_eq
    bool level_flat = false;         // wedge vanished at every sample
};
FlatnessReport level_flatness_test(const FieldSpec& field,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const Tols& tols = {});

/// Closed-form equiaffine normal of the graph of f along the last axis:
/// nm = -|H(f)|^{1/(n+2)} (v + Z). Returns the ambient (m+1)-vector.
Eigen::VectorXd graph_normal(const FieldSpec& f, const Eigen::VectorXd& base);

/// Gauss-Kronecker curvature via the Euclidean route (second fundamental
/// form w.r.t. the unit normal), independent of the adjugate path.
double gauss_kronecker_direct(const FieldSpec& field, const Eigen::VectorXd& point,
                              const Tols& tols = {});

/// Inertia of a covariant form restricted to ker dF.
Inertia tangent_inertia(const Eigen::MatrixXd& form, const Eigen::VectorXd& dF,
                        double tol = 1e-10);

}  // namespace eqa

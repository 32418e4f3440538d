#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqa/expr.hpp"
#include "eqa/jet.hpp"

namespace eqa {

/// A scalar field on R^m with declared equiaffine coordinates, evaluable as
/// a jet of any order up to `max_order`. Backed either by an expression AST
/// or by a custom evaluator (builtins with no printable closed form, derived
/// fields).
struct FieldSpec {
    int dim = 0;
    std::string name;
    std::vector<std::string> var_names;
    std::optional<Ast> source;
    std::function<Jet(const Eigen::VectorXd&, int)> evaluator;  // used when set
    int max_order = kMaxJetOrder;
    // Coordinates are equiaffine for the standard parallel volume form;
    // symdet's 2^{-1/2} off-diagonal scaling is embedded in its coordinates.
    std::string coordinate_convention = "equiaffine-standard";

    Jet eval(const Eigen::VectorXd& point, int order) const;
    bool printable() const { return source.has_value(); }
    std::string printed() const;
};

FieldSpec field_from_expr(const std::string& text, const std::vector<std::string>& var_names,
                          std::string name = "expr");
FieldSpec field_from_ast(Ast ast, std::vector<std::string> var_names, std::string name);

// Builtin registry. Tags: helicoid3, genhel, gn, symdet, graph, paraboloid,
// cheng_yau_det (ruled fields are built by the ruled module).
FieldSpec make_builtin(const std::string& tag, const std::vector<std::string>& params = {});

FieldSpec builtin_helicoid3();
FieldSpec builtin_genhel(const Ast& q_over_x1x2);
FieldSpec builtin_gn(const Ast& a, const Ast& b, const Ast& c);  // over x1, x2
FieldSpec builtin_symdet(int n);
FieldSpec builtin_graph(const Ast& f, int m);  // F = x_{m+1} - f(x_1..x_m)
FieldSpec builtin_paraboloid(int m);
FieldSpec builtin_cheng_yau_det(int n);

// symdet coordinate bookkeeping (diagonal slots first, then the strict upper
// triangle rows; off-diagonal coordinates carry the 2^{-1/2} scaling).
int symdet_dim(int n);
int symdet_coord_index(int i, int j, int n);
std::vector<std::string> symdet_var_names(int n);
Eigen::VectorXd symdet_coords_from_matrix(const Eigen::MatrixXd& x);
Eigen::MatrixXd symdet_matrix_from_coords(const Eigen::VectorXd& p);
/// Coordinates of the idempotent E_p = diag(+1 x (n-2p), -1 x 2p).
Eigen::VectorXd symdet_idempotent(int n, int p);

/// psi o F for a univariate expression psi(t).
FieldSpec reparam_field(const FieldSpec& f, const Ast& psi);

/// x -> F(a x + b); `a` must be invertible.
FieldSpec precompose_linear(const FieldSpec& f, const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& b);

/// x -> F(Phi(x)) for component expressions Phi_i over the same variables.
FieldSpec precompose_map(const FieldSpec& f, const std::vector<Ast>& components);

}  // namespace eqa

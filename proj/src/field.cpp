#include "eqa/field.hpp"

#include <algorithm>
#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

Jet FieldSpec::eval(const Eigen::VectorXd& point, int order) const {
    if (static_cast<int>(point.size()) != dim)
        throw ArgumentError("field '" + name + "': point has dimension " +
                            std::to_string(point.size()) + ", expected " + std::to_string(dim));
    if (order < 0 || order > max_order)
        throw ArgumentError("field '" + name + "': order " + std::to_string(order) +
                            " outside supported range [0, " + std::to_string(max_order) + "]");
    if (evaluator) return evaluator(point, order);
    if (!source) throw ArgumentError("field '" + name + "' has no evaluator");
    Jet j = eval_ast(*source, point, std::max(order, 1));
    return order == 0 ? j.truncated(0) : j;
}

std::string FieldSpec::printed() const {
    if (!source) throw ArgumentError("field '" + name + "' has no printable form");
    return pretty(*source, var_names);
}

FieldSpec field_from_ast(Ast ast, std::vector<std::string> var_names, std::string name) {
    FieldSpec f;
    f.dim = static_cast<int>(var_names.size());
    f.name = std::move(name);
    f.var_names = std::move(var_names);
    f.source = std::move(ast);
    return f;
}

FieldSpec field_from_expr(const std::string& text, const std::vector<std::string>& var_names,
                          std::string name) {
    return field_from_ast(parse(text, static_cast<int>(var_names.size()), var_names),
                          var_names, std::move(name));
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

FieldSpec builtin_helicoid3() {
    return field_from_expr("x*sin(u)+y*cos(u)", {"u", "x", "y"}, "helicoid3");
}

FieldSpec builtin_genhel(const Ast& q) {
    const std::vector<std::string> vars = {"x1", "x2", "x3", "x4", "x5"};
    Ast body = parse(
        "x3*sech(x1)*cos(x2*cosh(x1)^2) + x4*sech(x1)*sin(x2*cosh(x1)^2) + x5*tanh(x1)", 5, vars);
    // Q is given over (x1, x2); embed it into the five-variable space
    std::vector<Ast> embed = {Ast::variable(0), Ast::variable(1)};
    FieldSpec f = field_from_ast(Ast::add(std::move(body), substitute(q, embed)), vars, "genhel");
    return f;
}

FieldSpec builtin_gn(const Ast& a, const Ast& b, const Ast& c) {
    const std::vector<std::string> vars = {"x1", "x2", "x3", "x4", "x5"};
    std::vector<Ast> embed = {Ast::variable(0), Ast::variable(1)};
    Ast body = Ast::add(
        Ast::add(Ast::mul(substitute(a, embed), Ast::variable(2)),
                 Ast::mul(substitute(b, embed), Ast::variable(3))),
        Ast::mul(substitute(c, embed), Ast::variable(4)));
    return field_from_ast(std::move(body), vars, "gn");
}

int symdet_dim(int n) { return n * (n + 1) / 2; }

int symdet_coord_index(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    if (i == j) return i;
    // diagonal block first, then upper-triangle rows
    int idx = n;
    for (int r = 0; r < i; ++r) idx += n - 1 - r;
    return idx + (j - i - 1);
}

std::vector<std::string> symdet_var_names(int n) {
    std::vector<std::string> names(symdet_dim(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            names[symdet_coord_index(i, j, n)] =
                "x" + std::to_string(i + 1) + std::to_string(j + 1);
    return names;
}

Eigen::VectorXd symdet_coords_from_matrix(const Eigen::MatrixXd& x) {
    const int n = static_cast<int>(x.rows());
    Eigen::VectorXd p(symdet_dim(n));
    const double rt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            p[symdet_coord_index(i, j, n)] = (i == j) ? x(i, i) : rt2 * x(i, j);
    return p;
}

Eigen::MatrixXd symdet_matrix_from_coords(const Eigen::VectorXd& p) {
    int n = 1;
    while (symdet_dim(n) < p.size()) ++n;
    if (symdet_dim(n) != p.size())
        throw ArgumentError("symdet: coordinate vector has no matching matrix size");
    Eigen::MatrixXd x(n, n);
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = p[symdet_coord_index(i, j, n)];
            x(i, j) = x(j, i) = (i == j) ? v : inv_rt2 * v;
        }
    return x;
}

Eigen::VectorXd symdet_idempotent(int n, int p) {
    if (p < 0 || 2 * p >= n + 1)
        throw ArgumentError("symdet idempotent: p out of range");
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) e(i, i) = (i < n - 2 * p) ? 1.0 : -1.0;
    return symdet_coords_from_matrix(e);
}

namespace {

/// det X as an expression over the scaled coordinates, by permutation
/// expansion; entries X_ij = x^{ij} on the diagonal and 2^{-1/2} x^{ij} off it.
Ast symdet_ast(int n) {
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    auto entry = [&](int i, int j) {
        Ast v = Ast::variable(symdet_coord_index(i, j, n));
        if (i == j) return v;
        return Ast::mul(Ast::constant(inv_rt2), std::move(v));
    };
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::optional<Ast> acc;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Ast term = entry(0, perm[0]);
        for (int i = 1; i < n; ++i) term = Ast::mul(std::move(term), entry(i, perm[i]));
        if (!acc)
            acc = (inversions % 2 == 0) ? std::move(term) : Ast::neg(std::move(term));
        else
            acc = (inversions % 2 == 0) ? Ast::add(std::move(*acc), std::move(term))
                                        : Ast::sub(std::move(*acc), std::move(term));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::move(*acc);
}

}  // namespace

FieldSpec builtin_symdet(int n) {
    if (n < 2 || symdet_dim(n) > kMaxJetDim)
        throw ArgumentError("symdet: n must be in [2, 4]");
    FieldSpec f = field_from_ast(symdet_ast(n), symdet_var_names(n), "symdet");
    f.coordinate_convention = "equiaffine-standard (symdet off-diagonal scaling 2^{-1/2})";
    return f;
}

FieldSpec builtin_graph(const Ast& f_ast, int m) {
    std::vector<std::string> vars;
    for (int i = 1; i <= m + 1; ++i) vars.push_back("x" + std::to_string(i));
    Ast body = Ast::sub(Ast::variable(m), f_ast);
    return field_from_ast(std::move(body), vars, "graph");
}

FieldSpec builtin_paraboloid(int m) {
    std::vector<std::string> vars;
    for (int i = 1; i <= m; ++i) vars.push_back("x" + std::to_string(i));
    std::optional<Ast> sum;
    for (int i = 0; i < m; ++i) {
        Ast sq = Ast::pow(Ast::variable(i), 2.0);
        sum = sum ? Ast::add(std::move(*sum), std::move(sq)) : std::move(sq);
    }
    Ast f = Ast::div(std::move(*sum), Ast::constant(2.0));
    FieldSpec spec = builtin_graph(f, m);
    spec.name = "paraboloid";
    return spec;
}

FieldSpec builtin_cheng_yau_det(int n) {
    // F = -((n+1)/2) (log P - (n/2) log((n+1)/2)) on the positive cone
    FieldSpec det = builtin_symdet(n);
    const double half_np1 = 0.5 * (n + 1);
    Ast body = Ast::mul(
        Ast::constant(-half_np1),
        Ast::sub(Ast::call(Fn::Log, *det.source),
                 Ast::constant(0.5 * n * std::log(half_np1))));
    FieldSpec f = field_from_ast(std::move(body), det.var_names, "cheng_yau_det");
    f.coordinate_convention = det.coordinate_convention;
    return f;
}

FieldSpec make_builtin(const std::string& tag, const std::vector<std::string>& params) {
    auto want = [&](std::size_t k, const char* what) {
        if (params.size() != k)
            throw ArgumentError("builtin '" + tag + "' expects " + what);
    };
    auto as_int = [&](const std::string& s) {
        try {
            return std::stoi(s);
        } catch (...) {
            throw ArgumentError("builtin '" + tag + "': bad integer parameter '" + s + "'");
        }
    };
    const std::vector<std::string> x1x2 = {"x1", "x2"};
    if (tag == "helicoid3") {
        want(0, "no parameters");
        return builtin_helicoid3();
    }
    if (tag == "genhel") {
        if (params.empty()) return builtin_genhel(Ast::constant(0.0));
        want(1, "one expression Q(x1,x2)");
        return builtin_genhel(parse(params[0], 2, x1x2));
    }
    if (tag == "gn") {
        if (params.empty())
            return builtin_gn(parse("x1^2", 2, x1x2), parse("x1*x2", 2, x1x2),
                              parse("x2^2", 2, x1x2));
        want(3, "three expressions a,b,c over x1,x2");
        return builtin_gn(parse(params[0], 2, x1x2), parse(params[1], 2, x1x2),
                          parse(params[2], 2, x1x2));
    }
    if (tag == "symdet") {
        want(1, "one integer n");
        return builtin_symdet(as_int(params[0]));
    }
    if (tag == "graph") {
        want(2, "an integer m and an expression f(x1..xm)");
        const int m = as_int(params[0]);
        std::vector<std::string> vars;
        for (int i = 1; i <= m; ++i) vars.push_back("x" + std::to_string(i));
        return builtin_graph(parse(params[1], m, vars), m);
    }
    if (tag == "paraboloid") {
        want(1, "one integer m");
        return builtin_paraboloid(as_int(params[0]));
    }
    if (tag == "cheng_yau_det") {
        want(1, "one integer n");
        return builtin_cheng_yau_det(as_int(params[0]));
    }
    throw ArgumentError("unknown builtin tag '" + tag + "'");
}

// ---------------------------------------------------------------------------
// Derived fields
// ---------------------------------------------------------------------------

FieldSpec reparam_field(const FieldSpec& f, const Ast& psi) {
    FieldSpec out;
    out.dim = f.dim;
    out.name = "reparam(" + f.name + ")";
    out.var_names = f.var_names;
    out.max_order = f.max_order;
    out.evaluator = [f, psi](const Eigen::VectorXd& point, int order) {
        const int k = std::max(order, 1);
        Jet inner = f.eval(point, k);
        Eigen::VectorXd t(1);
        t[0] = inner.value();
        Jet outer = eval_ast(psi, t, k);
        Jet r = compose(outer, {inner});
        return order == 0 ? r.truncated(0) : r;
    };
    return out;
}

FieldSpec precompose_map(const FieldSpec& f, const std::vector<Ast>& components) {
    if (static_cast<int>(components.size()) != f.dim)
        throw ArgumentError("precompose_map: need one component per field variable");
    FieldSpec out;
    out.dim = f.dim;
    out.name = "compose(" + f.name + ")";
    out.var_names = f.var_names;
    out.max_order = f.max_order;
    out.evaluator = [f, components](const Eigen::VectorXd& point, int order) {
        const int k = std::max(order, 1);
        std::vector<Jet> inner;
        Eigen::VectorXd y(f.dim);
        for (int i = 0; i < f.dim; ++i) {
            inner.push_back(eval_ast(components[i], point, k));
            y[i] = inner.back().value();
        }
        Jet outer = f.eval(y, k);
        return compose(outer, inner);
    };
    return out;
}

FieldSpec precompose_linear(const FieldSpec& f, const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& b) {
    if (a.rows() != f.dim || a.cols() != f.dim || b.size() != f.dim)
        throw ArgumentError("precompose_linear: shape mismatch");
    FieldSpec out;
    out.dim = f.dim;
    out.name = "affine(" + f.name + ")";
    out.var_names = f.var_names;
    out.max_order = f.max_order;
    out.evaluator = [f, a, b](const Eigen::VectorXd& point, int order) {
        const int k = std::max(order, 1);
        std::vector<Jet> inner;
        Eigen::VectorXd y = a * point + b;
        for (int i = 0; i < f.dim; ++i) {
            Jet gi = Jet::constant(f.dim, k, y[i]);
            for (int j = 0; j < f.dim; ++j)
                if (a(i, j) != 0.0)
                    gi += Jet(a(i, j)) * (Jet::seed(point, j, k) - Jet(point[j]));
            inner.push_back(gi);
        }
        Jet outer = f.eval(y, k);
        return compose(outer, inner);
    };
    return out;
}

}  // namespace eqa

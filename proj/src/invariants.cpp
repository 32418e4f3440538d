#include "eqa/invariants.hpp"

#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

namespace {

Eigen::VectorXd values(const SVec<Dual>& v) {
    Eigen::VectorXd out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = v[i].v;
    return out;
}

Eigen::MatrixXd values(const SMat<Dual>& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).v;
    return out;
}

double rel(double resid, double scale) { return resid / std::max(1.0, scale); }

}  // namespace

Inertia tangent_inertia(const Eigen::MatrixXd& form, const Eigen::VectorXd& dF, double tol) {
    Eigen::MatrixXd basis = kernel_basis(dF);
    Eigen::MatrixXd restricted = basis.transpose() * form * basis;
    return ldl_inertia(restricted, tol);
}

InvariantReport analyze(const FieldSpec& field, const Eigen::VectorXd& point, const Tols& tols) {
    const Jet jet = field.eval(point, 4);
    const auto pd = run_pipeline<Dual>(jet, tols);
    const int m = pd.m, n = pd.n;

    InvariantReport rep;
    rep.point = point;
    rep.F = pd.F.v;
    rep.dF = values(pd.dF);
    rep.hess = SymForm(values(pd.hess));
    rep.H = pd.H.v;
    rep.U = ContraForm(values(pd.U));
    rep.N = values(pd.N);
    rep.Ucal = pd.Ucal.v;
    rep.flags.regular_point = pd.regular;
    rep.flags.nondegenerate = pd.nondegenerate;
    rep.flags.ucal_sign = pd.Ucal.v > 0 ? 1 : (pd.Ucal.v < 0 ? -1 : 0);
    if (pd.regular)
        rep.gauss_kronecker = pd.Ucal.v / std::pow(rep.dF.norm(), n + 2);

    if (!pd.nondegenerate) return rep;

    NormalData nd;
    nd.sff = SymForm(values(pd.sff_lo));
    nd.sff_inv = ContraForm(values(pd.sff_up));
    nd.k = SymForm(values(pd.k_lo));
    nd.k_inv = ContraForm(values(pd.k_up));
    nd.mu = values(pd.mu);
    nd.nm = values(pd.nm);
    nd.rho = values(pd.rho);
    nd.Z = values(pd.Z);

    // Shape operator S_i^j = -grad_i nm^j + tau_i nm^j; its image is tangent.
    nd.S.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            nd.S(i, j) = -pd.nm[j].g[i] + pd.tau_nm[i].v * pd.nm[j].v;

    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += nd.S(i, i);
    nd.kappa_eq = trace / n;

    const double n_dot_mu = nd.mu.dot(rep.N);
    const double au = std::abs(rep.Ucal);
    double div = 0.0;
    for (int p = 0; p < m; ++p) div += pd.h_flow[p].g[p];
    nd.kappa_eq_div =
        (div + (n + 2) * std::pow(au, 1.0 / (n + 2)) / rep.Ucal * (rep.H - n_dot_mu)) / n;

    nd.inertia_k = tangent_inertia(nd.k.mat(), rep.dF, tols.nondegenerate);

    nd.shape_kernel_residual =
        rel((nd.S * rep.dF).cwiseAbs().maxCoeff(),
            nd.S.cwiseAbs().maxCoeff() * rep.dF.cwiseAbs().maxCoeff());

    // det(grad rho) against its closed form
    Eigen::MatrixXd grad_rho(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) grad_rho(i, j) = pd.rho[j].g[i];
    const double lhs = grad_rho.determinant();
    const double rhs = ((n + 1) % 2 == 0 ? 1.0 : -1.0) *
                       std::pow(au, -double(n + 1) / (n + 2)) * (rep.H - n_dot_mu);
    nd.dethrho_residual = rel(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));

    // Classical alignment of the normal: with h the representative of the
    // second fundamental form w.r.t. N and Z the tangential correction,
    // n tau_I + h^{PQ} grad_I h_{PQ} + (n+2) Z^P h_{IP} must vanish
    // tangentially when nm is the equiaffine normal.
    {
        SMat<Dual> h(m, m);
        const Dual inv_ucal = Dual(1.0) / pd.Ucal;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) h(i, j) = -(pd.sff_lo(i, j) * inv_ucal);
        Eigen::MatrixXd h_val = values(h);
        Eigen::MatrixXd h_up = -rep.Ucal * nd.sff_inv.mat();  // tangential inverse of h
        Eigen::VectorXd tau_n = (n + 2) * nd.mu - (rep.H / rep.Ucal) * rep.dF;

        Eigen::VectorXd t1 = double(n) * tau_n;
        Eigen::VectorXd t2 = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int p = 0; p < m; ++p)
                for (int q = 0; q < m; ++q) acc += h_up(p, q) * h(p, q).g[i];
            t2[i] = acc;
        }
        Eigen::VectorXd t3 = (n + 2) * (h_val * nd.Z);
        Eigen::VectorXd r = t1 + t2 + t3;
        Eigen::MatrixXd basis = kernel_basis(rep.dF);
        const double scale = std::max({t1.cwiseAbs().maxCoeff(), t2.cwiseAbs().maxCoeff(),
                                       t3.cwiseAbs().maxCoeff()});
        nd.alignment_residual = rel((basis.transpose() * r).cwiseAbs().maxCoeff(), scale);
    }

    rep.normal = std::move(nd);
    return rep;
}

double hessian_determinant(const FieldSpec& field, const Eigen::VectorXd& point) {
    const Jet jet = field.eval(point, 2);
    const int m = jet.dim();
    Eigen::MatrixXd h(m, m);
    std::vector<int> e(m, 0);
    for (int i = 0; i < m; ++i) {
        e[i] += 1;
        for (int j = i; j < m; ++j) {
            e[j] += 1;
            h(i, j) = h(j, i) = jet.derivative(MultiIndex{e});
            e[j] -= 1;
        }
        e[i] -= 1;
    }
    return det_dense(SMat<double>(h));
}

UInvariant u_invariant(const FieldSpec& field, const Eigen::VectorXd& point) {
    const Jet jet = field.eval(point, 2);
    const auto pd = run_pipeline<double>(jet);
    const double scale =
        std::max(1.0, pd.U.cwiseAbs().maxCoeff() * pd.dF.cwiseAbs().maxCoeff() *
                          pd.dF.cwiseAbs().maxCoeff());
    if (pd.ucal_consistency > 1e-10 * scale)
        throw Error("u_invariant: bordered determinant and dF(N) disagree");
    return {pd.Ucal, pd.N, ContraForm(pd.U)};
}

HomogeneityResidual homogeneity_check(const FieldSpec& field, const Eigen::VectorXd& point,
                                      double lambda) {
    const Jet jet = field.eval(point, 2);
    const auto pd = run_pipeline<double>(jet);
    HomogeneityResidual r;
    r.scalar_identity = std::abs((lambda - 1.0) * pd.Ucal - lambda * pd.H * pd.F);
    r.euler_identity = ((lambda - 1.0) * pd.N - pd.H * point).cwiseAbs().maxCoeff();
    return r;
}

ReparamRecord reparam_transform(const FieldSpec& field, const Ast& psi,
                                const Eigen::VectorXd& point, const Tols& tols) {
    const InvariantReport base = analyze(field, point, tols);
    if (!base.flags.nondegenerate)
        throw DegenerateError("reparam_transform: base point is degenerate");
    const int n = static_cast<int>(point.size()) - 1;

    Eigen::VectorXd t(1);
    t[0] = base.F;
    const Jet psi_jet = eval_ast(psi, t, 2);
    const double pdot = psi_jet.derivative(MultiIndex{{1}});
    const double pddot = psi_jet.derivative(MultiIndex{{2}});
    if (std::abs(pdot) <= 1e-12 * std::max(1.0, std::abs(base.F)))
        throw StationaryReparamError("reparam_transform: psi'(F(point)) vanishes");

    const InvariantReport tilde = analyze(reparam_field(field, psi), point, tols);

    ReparamRecord rec;
    rec.psi_dot = pdot;
    const double u_rhs = std::pow(pdot, n + 2) * base.Ucal;
    rec.ucal_residual = rel(std::abs(tilde.Ucal - u_rhs), std::max(std::abs(tilde.Ucal),
                                                                   std::abs(u_rhs)));
    const double h_rhs = std::pow(pdot, n + 1) * (base.H + (pddot / pdot) * base.Ucal);
    rec.h_residual =
        rel(std::abs(tilde.H - h_rhs), std::max(std::abs(tilde.H), std::abs(h_rhs)));
    Eigen::VectorXd n_rhs = std::pow(pdot, n + 1) * base.N;
    rec.n_residual = rel((tilde.N - n_rhs).cwiseAbs().maxCoeff(),
                         std::max(tilde.N.cwiseAbs().maxCoeff(), n_rhs.cwiseAbs().maxCoeff()));
    Eigen::VectorXd nm_rhs = (pdot > 0 ? 1.0 : -1.0) * base.normal->nm;
    rec.nm_residual =
        rel((tilde.normal->nm - nm_rhs).cwiseAbs().maxCoeff(), nm_rhs.cwiseAbs().maxCoeff());
    return rec;
}

AffineRecord affine_transform(const FieldSpec& field, const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, const Eigen::VectorXd& point,
                              const Tols& tols) {
    const int m = field.dim;
    const int n = m - 1;
    const double det = a.determinant();
    if (std::abs(det) < 1e-12) throw SingularMapError("affine_transform: singular linear part");

    // (g.F)(x) = F(g^{-1} x) = F(a^{-1} x - a^{-1} b)
    Eigen::MatrixXd a_inv = a.inverse();
    const FieldSpec gf = precompose_linear(field, a_inv, -a_inv * b);

    const Eigen::VectorXd y = a_inv * (point - b);
    const InvariantReport at_y = analyze(field, y, tols);
    const InvariantReport at_x = analyze(gf, point, tols);
    if (!at_y.flags.nondegenerate || !at_x.flags.nondegenerate)
        throw DegenerateError("affine_transform: degenerate sample");

    AffineRecord rec;
    rec.det_linear = det;
    const double h_rhs = det * det * at_x.H;
    rec.h_residual = rel(std::abs(at_y.H - h_rhs), std::max(std::abs(at_y.H), std::abs(h_rhs)));
    const double u_rhs = det * det * at_x.Ucal;
    rec.ucal_residual =
        rel(std::abs(at_y.Ucal - u_rhs), std::max(std::abs(at_y.Ucal), std::abs(u_rhs)));
    Eigen::VectorXd lhs = a * at_y.normal->nm;
    Eigen::VectorXd rhs = std::pow(std::abs(det), 2.0 / (n + 2)) * at_x.normal->nm;
    rec.nm_residual = rel((lhs - rhs).cwiseAbs().maxCoeff(),
                          std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()));
    return rec;
}

double projective_residual(const FieldSpec& field, const Eigen::MatrixXd& a,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& c, double d,
                           const Eigen::VectorXd& point, const Tols& tols) {
    const int m = field.dim;
    const double denom = c.dot(point) + d;
    if (std::abs(denom) < 1e-9)
        throw SingularMapError("projective_residual: map denominator vanishes at point");

    // component jets of Phi and the Jacobian determinant
    std::vector<Jet> comps;
    Eigen::VectorXd image(m);
    Jet den = Jet::constant(m, 2, d);
    for (int j = 0; j < m; ++j) den += Jet(c[j]) * Jet::seed(point, j, 2);
    for (int i = 0; i < m; ++i) {
        Jet num = Jet::constant(m, 2, b[i]);
        for (int j = 0; j < m; ++j) num += Jet(a(i, j)) * Jet::seed(point, j, 2);
        comps.push_back(num / den);
        image[i] = comps.back().value();
    }
    Eigen::MatrixXd jac(m, m);
    for (int i = 0; i < m; ++i) jac.row(i) = comps[i].gradient().transpose();
    const double det_t = jac.determinant();

    // U(F o Phi)(x) vs (det TPhi)^2 U(F)(Phi(x))
    FieldSpec composed;
    composed.dim = m;
    composed.name = "projective(" + field.name + ")";
    composed.var_names = field.var_names;
    composed.max_order = 2;
    composed.evaluator = [field, a, b, c, d](const Eigen::VectorXd& x, int order) {
        const int k = std::max(order, 1);
        const int mm = field.dim;
        Jet den_j = Jet::constant(mm, k, d);
        for (int j = 0; j < mm; ++j) den_j += Jet(c[j]) * Jet::seed(x, j, k);
        if (std::abs(den_j.value()) < 1e-12)
            throw SingularMapError("projective map: denominator vanished");
        std::vector<Jet> inner;
        Eigen::VectorXd y(mm);
        for (int i = 0; i < mm; ++i) {
            Jet num = Jet::constant(mm, k, b[i]);
            for (int j = 0; j < mm; ++j) num += Jet(a(i, j)) * Jet::seed(x, j, k);
            inner.push_back(num / den_j);
            y[i] = inner.back().value();
        }
        return compose(field.eval(y, k), inner);
    };

    const double lhs = u_invariant(composed, point).Ucal;
    const double rhs = det_t * det_t * u_invariant(field, image).Ucal;
    return rel(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
}

FieldSpec reilly_normalize(const FieldSpec& field, const Eigen::VectorXd& point,
                           const Tols& tols) {
    const Jet jet = field.eval(point, 2);
    const auto pd = run_pipeline<double>(jet, tols);
    if (!pd.nondegenerate)
        throw DegenerateError("reilly_normalize: |U(F)| below tolerance at anchor point");
    const double r = pd.F;
    const int n = pd.n;

    FieldSpec out;
    out.dim = field.dim;
    out.name = "reilly(" + field.name + ")";
    out.var_names = field.var_names;
    out.max_order = 2;  // each jet order of G costs two orders of F
    out.evaluator = [field, r, n, tols](const Eigen::VectorXd& x, int order) {
        const int k = std::max(order, 1);
        const Jet deep = field.eval(x, std::min(k + 2, kMaxJetOrder));
        const int m = deep.dim();

        // U(F) as an order-k jet, via the bordered determinant over jets
        SMat<Jet> hess(m, m);
        SVec<Jet> grad(m);
        std::vector<int> e(m, 0);
        for (int i = 0; i < m; ++i) {
            e[i] = 1;
            grad[i] = deep.derivative_jet(MultiIndex{e}, k);
            for (int j = i; j < m; ++j) {
                e[j] += 1;
                hess(i, j) = deep.derivative_jet(MultiIndex{e}, k);
                hess(j, i) = hess(i, j);
                e[j] -= 1;
            }
            e[i] = 0;
        }
        Jet ucal = bordered_determinant(hess, grad);
        if (std::abs(ucal.value()) <= tols.nondegenerate)
            throw DegenerateError("reilly field: |U(F)| below tolerance at sample");
        Jet scale = pow(abs(ucal), -1.0 / (n + 2));
        Jet g = scale * (deep.truncated(k) - Jet(r));
        return order == 0 ? g.truncated(0) : g;
    };
    return out;
}

FlatnessReport level_flatness_test(const FieldSpec& field,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const Tols& tols) {
    FlatnessReport rep;
    const int n = field.dim - 1;
    double wedge_scale = 1.0;
    for (const auto& p : points) {
        const InvariantReport r = analyze(field, p, tols);
        if (!r.flags.nondegenerate)
            throw DegenerateError("level_flatness_test: degenerate sample");
        const auto& nd = *r.normal;
        for (int i = 0; i < field.dim; ++i)
            for (int j = i + 1; j < field.dim; ++j) {
                rep.max_wedge = std::max(
                    rep.max_wedge, std::abs(nd.mu[i] * nd.rho[j] - nd.mu[j] * nd.rho[i]));
            }
        wedge_scale = std::max(wedge_scale, nd.mu.cwiseAbs().maxCoeff() *
                                                nd.rho.cwiseAbs().maxCoeff());
        const double au = std::abs(r.Ucal);
        const double factor =
            (r.Ucal > 0 ? 1.0 : -1.0) * std::pow(au, -double(n + 1) / (n + 2));
        rep.max_nm_vs_n =
            std::max(rep.max_nm_vs_n, (nd.nm + factor * r.N).cwiseAbs().maxCoeff());
        const double namc = (n + 2) * factor * (r.H - nd.mu.dot(r.N)) / n;
        rep.max_namc_residual = std::max(rep.max_namc_residual, std::abs(namc - nd.kappa_eq));
    }
    rep.level_flat = rep.max_wedge <= 1e-9 * wedge_scale;
    return rep;
}

Eigen::VectorXd graph_normal(const FieldSpec& f, const Eigen::VectorXd& base) {
    const Jet jet = f.eval(base, 4);
    const auto pd = run_pipeline<Dual>(jet);
    const int mw = pd.m;      // graph domain dimension
    const int n = mw;         // hypersurface dimension in R^{mw+1}
    if (std::abs(pd.H.v) < 1e-12)
        throw DegenerateError("graph_normal: H(f) vanishes at base point");

    // Z = pushforward of the graph-block inverse of Hess(x_{m+1} - f), i.e.
    // (-f)^{IQ}, applied to d_Q log|H(f)|^{1/(n+2)}. The sign matters: with
    // +f^{IQ} the resulting vector leaves the affine normal line (checked
    // against the plane-curve affine normal for n = 1).
    Eigen::MatrixXd hess = Eigen::MatrixXd(mw, mw);
    for (int i = 0; i < mw; ++i)
        for (int j = 0; j < mw; ++j) hess(i, j) = pd.hess(i, j).v;
    Eigen::VectorXd dlog(mw);
    for (int q = 0; q < mw; ++q) dlog[q] = pd.H.g[q] / pd.H.v / (n + 2);
    Eigen::VectorXd w = -hess.partialPivLu().solve(dlog);

    Eigen::VectorXd nm(mw + 1);
    const double factor = -std::pow(std::abs(pd.H.v), 1.0 / (n + 2));
    for (int i = 0; i < mw; ++i) nm[i] = factor * w[i];
    nm[mw] = factor * (1.0 + w.dot(values(pd.dF)));
    return nm;
}

double gauss_kronecker_direct(const FieldSpec& field, const Eigen::VectorXd& point,
                              const Tols& tols) {
    const Jet jet = field.eval(point, 2);
    const auto pd = run_pipeline<double>(jet, tols);
    if (!pd.regular) throw CriticalPointError("gauss_kronecker_direct: dF vanishes");
    const int m = pd.m;
    const double norm = pd.dF.norm();
    Eigen::VectorXd ecov = -pd.dF / norm;  // E_i; upper components coincide
    const Eigen::MatrixXd& hess = pd.hess;
    const double ehe = ecov.dot(hess * ecov);
    Eigen::VectorXd he = hess * ecov;
    Eigen::MatrixXd pi(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            pi(i, j) = (hess(i, j) - he[i] * ecov[j] - he[j] * ecov[i] +
                        ehe * ecov[i] * ecov[j]) /
                       norm;
    Eigen::MatrixXd lambda = pi + ecov * ecov.transpose();
    return lambda.determinant();
}

}  // namespace eqa

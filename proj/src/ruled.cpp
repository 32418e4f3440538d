#include "eqa/ruled.hpp"

#include <cmath>
#include <random>

#include "eqa/errors.hpp"
#include "eqa/linalg.hpp"

namespace eqa {

Eigen::VectorXd CentroaffineImmersion::value(const Eigen::VectorXd& u) const {
    Eigen::VectorXd a(n + 1);
    for (int i = 0; i <= n; ++i) a[i] = components[i].eval(u, 0).value();
    return a;
}

Eigen::MatrixXd CentroaffineImmersion::differential(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd da(n + 1, n);
    for (int i = 0; i <= n; ++i) {
        Jet j = components[i].eval(u, 1);
        da.row(i) = j.gradient().transpose();
    }
    return da;
}

double CentroaffineImmersion::ada_determinant(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd m(n + 1, n + 1);
    m.col(0) = value(u);
    m.rightCols(n) = differential(u);
    return m.determinant();
}

Eigen::VectorXd CentroaffineImmersion::minors(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd da = differential(u);
    Eigen::VectorXd out(n + 1);
    for (int i = 0; i <= n; ++i) {
        Eigen::MatrixXd sub(n, n);
        int rr = 0;
        for (int r = 0; r <= n; ++r) {
            if (r == i) continue;
            sub.row(rr++) = da.row(r);
        }
        out[i] = sub.determinant();
    }
    return out;
}

CentroaffineImmersion wronskian_pair(const Ast& a, const Ast& b, Box domain) {
    CentroaffineImmersion imm;
    imm.n = 1;
    imm.name = "wronskian_pair";
    imm.domain = domain;
    imm.components.push_back(field_from_ast(a, {"t"}, "a"));
    imm.components.push_back(field_from_ast(b, {"t"}, "b"));
    return imm;
}

CentroaffineImmersion extension_lift(const CentroaffineImmersion& b_imm, const Ast& a,
                                     const Ast& b, const Ast& c, std::optional<Box> domain) {
    const int n = b_imm.n + 1;
    for (const auto& comp : b_imm.components)
        if (!comp.source)
            throw ArgumentError("extension_lift: base immersion must be expression-backed");

    // new variables (t, u^1, ..., u^{n-1}); base components get u^j c(t)
    std::vector<std::string> vars = {"t"};
    for (int j = 1; j < n; ++j) vars.push_back("u" + std::to_string(j));

    std::vector<Ast> stretched;
    for (int j = 0; j < n - 1; ++j)
        stretched.push_back(Ast::mul(Ast::variable(1 + j), c));  // c is over var 0 already

    CentroaffineImmersion out;
    out.n = n;
    out.name = "lift(" + b_imm.name + ")";
    out.domain = domain ? *domain : Box::centered(n, 1.5);
    for (int i = 0; i < n; ++i) {
        Ast comp = Ast::mul(a, substitute(*b_imm.components[i].source, stretched));
        out.components.push_back(field_from_ast(std::move(comp), vars, "a" + std::to_string(i)));
    }
    out.components.push_back(field_from_ast(b, vars, "a" + std::to_string(n)));
    return out;
}

Calibration calibrate_kappa(const CentroaffineImmersion& a,
                            const std::vector<Eigen::VectorXd>& samples) {
    if (samples.empty()) throw ArgumentError("calibrate_kappa: no samples");
    std::vector<double> dets;
    dets.reserve(samples.size());
    for (const auto& u : samples) {
        const double d = a.ada_determinant(u);
        if (std::abs(d) < 1e-13)
            throw NonCentroaffineError("calibrate_kappa: det[A | dA] vanishes at a sample");
        dets.push_back(d);
    }
    Calibration cal;
    for (double d : dets) cal.kappa += d;
    cal.kappa /= static_cast<double>(dets.size());
    for (double d : dets)
        cal.max_dev = std::max(cal.max_dev, std::abs(d - cal.kappa) / std::abs(cal.kappa));
    return cal;
}

CentroaffineImmersion make_immersion(const std::string& name,
                                     const std::vector<std::string>& params) {
    const std::vector<std::string> t = {"t"};
    const std::vector<std::string> x12 = {"x1", "x2"};
    if (name == "circle")
        return wronskian_pair(parse("sin(t)", 1, t), parse("cos(t)", 1, t));
    if (name == "circle_cs")  // (cos, sin): the base the lifted examples use
        return wronskian_pair(parse("cos(t)", 1, t), parse("sin(t)", 1, t));
    if (name == "exp")
        return wronskian_pair(parse("exp(-t)", 1, t), parse("-exp(t)", 1, t));
    if (name == "ahelic")
        return extension_lift(make_immersion("circle_cs"), parse("sech(t)", 1, t),
                              parse("tanh(t)", 1, t), parse("cosh(t)^2", 1, t));
    if (name == "coshlift")
        return extension_lift(make_immersion("circle_cs"), parse("cosh(t)", 1, t),
                              parse("sinh(t)", 1, t), parse("sech(t)", 1, t));
    if (name == "sphere_strip") {
        CentroaffineImmersion imm;
        imm.n = 2;
        imm.name = "sphere_strip";
        imm.domain.lo = Eigen::VectorXd(2);
        imm.domain.hi = Eigen::VectorXd(2);
        imm.domain.lo << -0.9, -2.0;
        imm.domain.hi << 0.9, 2.0;
        imm.components.push_back(field_from_expr("sqrt(1-x1^2)*cos(x2)", x12, "a0"));
        imm.components.push_back(field_from_expr("sqrt(1-x1^2)*sin(x2)", x12, "a1"));
        imm.components.push_back(field_from_expr("x1", x12, "a2"));
        return imm;
    }
    if (name == "sphere_polar") {
        CentroaffineImmersion imm;
        imm.n = 2;
        imm.name = "sphere_polar";
        imm.domain.lo = Eigen::VectorXd(2);
        imm.domain.hi = Eigen::VectorXd(2);
        imm.domain.lo << 0.4, -2.0;
        imm.domain.hi << 2.7, 2.0;
        imm.components.push_back(field_from_expr("sin(x1)*cos(x2)", x12, "a0"));
        imm.components.push_back(field_from_expr("sin(x1)*sin(x2)", x12, "a1"));
        imm.components.push_back(field_from_expr("cos(x1)", x12, "a2"));
        return imm;
    }
    if (name == "graph1") {
        // a^1 = g + kappa0, a^{i+1} = u^i with g positively homogeneous of
        // degree one; params: n, g expression, kappa0
        if (params.size() != 3)
            throw ArgumentError("immersion 'graph1' expects n, g(x1..xn), kappa0");
        const int n = std::stoi(params[0]);
        std::vector<std::string> vars;
        for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
        CentroaffineImmersion imm;
        imm.n = n;
        imm.name = "graph1";
        imm.domain = Box::centered(n, 1.5);
        imm.domain.lo.array() += 2.0;  // sampling stays off the cone point of g
        imm.domain.hi.array() += 2.0;
        Ast g = parse(params[1], n, vars);
        imm.components.push_back(field_from_ast(
            Ast::add(std::move(g), Ast::constant(std::stod(params[2]))), vars, "a0"));
        for (int i = 0; i < n; ++i)
            imm.components.push_back(
                field_from_ast(Ast::variable(i), vars, "a" + std::to_string(i + 1)));
        return imm;
    }
    throw ArgumentError("unknown immersion '" + name + "'");
}

RuledField build_ruled_field(const CentroaffineImmersion& a, const Ast& q, int samples,
                             unsigned seed) {
    const int n = a.n;
    RuledField rf;
    rf.immersion = a;
    rf.q = q;

    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> pts;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) {
            std::uniform_real_distribution<double> d(a.domain.lo[i], a.domain.hi[i]);
            u[i] = d(rng);
        }
        pts.push_back(u);
    }
    Calibration cal = calibrate_kappa(a, pts);
    if (!cal.calibrated())
        throw CalibrationError("build_ruled_field: |A dA| varies by " +
                               std::to_string(cal.max_dev) + " over the domain");
    rf.kappa = cal.kappa;
    rf.kappa_dev = cal.max_dev;

    // F = sum a^i(u) x_i + Q(u) over (u^1..u^n, x_1..x_{n+1}); the component
    // expressions reference variables 0..n-1, which keep their slots here
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("u" + std::to_string(i));
    for (int i = 1; i <= n + 1; ++i) vars.push_back("x" + std::to_string(i));
    std::optional<Ast> body;
    for (int i = 0; i <= n; ++i) {
        if (!a.components[i].source)
            throw ArgumentError("build_ruled_field: immersion must be expression-backed");
        Ast term = Ast::mul(*a.components[i].source, Ast::variable(n + i));
        body = body ? Ast::add(std::move(*body), std::move(term)) : std::move(term);
    }
    body = Ast::add(std::move(*body), q);
    rf.field = field_from_ast(std::move(*body), vars, "ruled(" + a.name + ")");
    return rf;
}

Eigen::VectorXd v_field(const RuledField& rf, const Eigen::VectorXd& point) {
    const int n = rf.n();
    Eigen::VectorXd minors = rf.immersion.minors(point.head(n));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(rf.ambient_dim());
    for (int i = 0; i <= n; ++i) v[n + i] = (i % 2 == 0 ? 1.0 : -1.0) * minors[i];
    return v;
}

Eigen::MatrixXd ruling_frame(const RuledField& rf, const Eigen::VectorXd& u) {
    const int n = rf.n();
    Eigen::VectorXd a = rf.immersion.value(u);
    const double scale = a.cwiseAbs().maxCoeff();

    bool tridiagonal_ok = true;
    for (int i = 0; i < n; ++i)
        if (std::hypot(a[i], a[i + 1]) <= 1e-8 * scale) tridiagonal_ok = false;

    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(rf.ambient_dim(), n);
    if (tridiagonal_ok) {
        for (int i = 0; i < n; ++i) {
            frame(n + i, i) = a[i + 1];  // Y_I = a^{I+1} d_{x_I} - a^I d_{x_{I+1}}
            frame(n + i + 1, i) = -a[i];
        }
        return frame;
    }
    // fallback: orthonormal kernel of the covector A(u), placed in the x-block
    Eigen::MatrixXd kernel = kernel_basis(a);
    frame.bottomRows(n + 1) = kernel;
    return frame;
}

ContactReport contact_symplectic_check(const RuledField& rf,
                                       const std::vector<Eigen::VectorXd>& points) {
    const int n = rf.n();
    const int m = rf.ambient_dim();
    ContactReport rep;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const double sign = ((n * (n + 1) / 2) % 2 == 0) ? 1.0 : -1.0;

    for (const auto& p : points) {
        const Eigen::VectorXd u = p.head(n);
        Eigen::VectorXd a = rf.immersion.value(u);
        Eigen::MatrixXd da = rf.immersion.differential(u);

        Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
        beta.tail(n + 1) = a;
        Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(m, m);
        for (int bigi = 0; bigi < n; ++bigi)
            for (int i = 0; i <= n; ++i) {
                omega(bigi, n + i) = da(i, bigi);  // dbeta = da^i ^ dx_i
                omega(n + i, bigi) = -da(i, bigi);
            }

        // beta ^ omega^n evaluated on the coordinate basis
        double top = 0.0;
        for (int i = 0; i < m; ++i) {
            if (beta[i] == 0.0) continue;
            Eigen::MatrixXd sub(m - 1, m - 1);
            int rr = 0;
            for (int r = 0; r < m; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < m; ++c) {
                    if (c == i) continue;
                    sub(rr, cc++) = omega(r, c);
                }
                ++rr;
            }
            top += (i % 2 == 0 ? 1.0 : -1.0) * beta[i] * fact * pfaffian(sub);
        }
        const double want = sign * fact * rf.kappa;
        rep.contact_residual = std::max(rep.contact_residual,
                                        std::abs(top - want) / std::max(1.0, std::abs(want)));

        Eigen::VectorXd v = v_field(rf, p);
        rep.reeb_pairing = std::max(rep.reeb_pairing, std::abs(beta.dot(v) - rf.kappa));
        rep.reeb_contraction =
            std::max(rep.reeb_contraction, (omega * v).cwiseAbs().maxCoeff());

        Eigen::MatrixXd frame = ruling_frame(rf, u);
        rep.lagrangian_residual =
            std::max(rep.lagrangian_residual,
                     (frame.transpose() * omega * frame).cwiseAbs().maxCoeff());

        // dbeta restricted to the tangent space of the level set
        Eigen::VectorXd df = rf.field.eval(p, 1).gradient();
        Eigen::MatrixXd tangent = kernel_basis(df);
        Eigen::MatrixXd restricted = tangent.transpose() * omega * tangent;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
        const double top_sv = svd.singularValues()(0);
        int nullity = 0;
        for (int i = 0; i < restricted.rows(); ++i)
            if (svd.singularValues()(i) <= 1e-10 * std::max(top_sv, 1e-300)) ++nullity;
        rep.max_symplectic_nullity = std::max(rep.max_symplectic_nullity, nullity);
    }
    return rep;
}

Eigen::VectorXd level_parameterization(const RuledField& rf, double t, const Eigen::VectorXd& r,
                                       const Eigen::VectorXd& s) {
    const int n = rf.n();
    if (r.size() != n || s.size() != n)
        throw ArgumentError("level_parameterization: r and s must have the ruling dimension");
    Eigen::VectorXd point(rf.ambient_dim());
    point.head(n) = r;
    point.tail(n + 1).setZero();

    Eigen::MatrixXd frame = ruling_frame(rf, r);
    Eigen::VectorXd v = v_field(rf, point);
    const double q_val = eval_ast(rf.q, r, 1).value();
    Eigen::VectorXd x = (t - q_val) / rf.kappa * v.tail(n + 1);
    for (int i = 0; i < n; ++i) x += s[i] * frame.col(i).tail(n + 1);
    point.tail(n + 1) = x;
    return point;
}

AffineSphereVerdict affine_sphere_test(const CentroaffineImmersion& a,
                                       const std::vector<Eigen::VectorXd>& samples) {
    AffineSphereVerdict verdict;
    std::vector<Eigen::VectorXd> vs;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(a.n + 1);
    for (const auto& u : samples) {
        Eigen::VectorXd minors = a.minors(u);
        Eigen::VectorXd v(a.n + 1);
        for (int i = 0; i <= a.n; ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) * minors[i];
        vs.push_back(v);
        mean += v;
    }
    mean /= static_cast<double>(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            verdict.v_variation =
                std::max(verdict.v_variation, (vs[i] - vs[j]).cwiseAbs().maxCoeff());
    verdict.affine_sphere = verdict.v_variation <= 1e-9;
    if (verdict.affine_sphere) verdict.hyperplane_functional = mean;
    return verdict;
}

RuledSuiteReport ruled_invariant_suite(const RuledField& rf,
                                       const std::vector<Eigen::VectorXd>& points,
                                       const Tols& tols) {
    RuledSuiteReport rep;
    const int n = rf.n();
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    const double ucal_want = sgn * rf.kappa * rf.kappa;
    const double nm_scale =
        -(rf.kappa > 0 ? 1.0 : -1.0) * std::pow(std::abs(rf.kappa), -double(n) / (n + 2));

    for (const auto& p : points) {
        InvariantReport r = analyze(rf.field, p, tols);
        if (!r.flags.nondegenerate)
            throw DegenerateError("ruled_invariant_suite: degenerate sample");
        const auto& nd = *r.normal;
        Eigen::VectorXd v = v_field(rf, p);

        rep.max_kappa_eq = std::max(rep.max_kappa_eq, std::abs(nd.kappa_eq));
        rep.max_nm_residual =
            std::max(rep.max_nm_residual, (nd.nm - nm_scale * v).cwiseAbs().maxCoeff());
        rep.max_s_squared = std::max(rep.max_s_squared, (nd.S * nd.S).cwiseAbs().maxCoeff());
        rep.max_ucal_residual = std::max(rep.max_ucal_residual, std::abs(r.Ucal - ucal_want));

        const double hess_scale = r.hess.mat().cwiseAbs().maxCoeff();
        rep.max_radical_residual =
            std::max(rep.max_radical_residual,
                     (r.hess.mat() * v).cwiseAbs().maxCoeff() /
                         std::max(1e-300, hess_scale * v.cwiseAbs().maxCoeff()));
        Eigen::MatrixXd adj_want = sgn * v * v.transpose();
        rep.max_adjugate_residual =
            std::max(rep.max_adjugate_residual,
                     (r.U.mat() - adj_want).cwiseAbs().maxCoeff() /
                         std::max(1.0, adj_want.cwiseAbs().maxCoeff()));

        Eigen::MatrixXd frame = ruling_frame(rf, p.head(n));
        rep.max_ruling_in_ker_s = std::max(
            rep.max_ruling_in_ker_s, (nd.S.transpose() * frame).cwiseAbs().maxCoeff());
        rep.max_ruling_isotropy =
            std::max(rep.max_ruling_isotropy,
                     (frame.transpose() * nd.k.mat() * frame).cwiseAbs().maxCoeff());

        if (!(nd.inertia_k == Inertia{n, n, 0})) rep.split_signature = false;
        if (inertia(r.hess, tols.nondegenerate).zero != 1) rep.hessian_nullity_one = false;
    }
    return rep;
}

}  // namespace eqa

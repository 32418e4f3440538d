#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "eqa/errors.hpp"
#include "eqa/flow.hpp"

using namespace eqa;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double e : v) x[i++] = e;
    return x;
}
}  // namespace

TEST_CASE("F decreases linearly along the helicoid flow") {
    FieldSpec heli = builtin_helicoid3();
    Trajectory traj = integrate(heli, vec({0.0, 1.0, 0.0}), 1.0, 100);
    REQUIRE_FALSE(traj.truncated());
    REQUIRE(traj.times.size() == 101);
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        CHECK(std::abs(traj.F_values[k] - traj.F_values[0] + traj.times[k]) <= 1e-8);
}

TEST_CASE("degenerate and trivial starts") {
    FieldSpec heli = builtin_helicoid3();
    Trajectory single = integrate(heli, vec({0.2, 1.0, 0.3}), 0.0, 5);
    CHECK(single.times.size() == 1);

    FieldSpec gn = make_builtin("gn");
    CHECK_THROWS_AS(integrate(gn, vec({1, 1, 1, 1, 1}), 1.0, 10), DegenerateError);

    CHECK_THROWS_AS(integrate(heli, vec({0, 1, 0}), 1.0, 0), ArgumentError);
}

TEST_CASE("RK4 matches the exact ruled flow") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    RuledField heli = build_ruled_field(make_immersion("circle"), Ast::constant(0.0));
    RuledField genhel =
        build_ruled_field(make_immersion("ahelic"), parse("x1*x2", 2, {"x1", "x2"}));

    for (const RuledField* rf : {&heli, &genhel}) {
        const int n = rf->n();
        for (int trial = 0; trial < 3; ++trial) {
            Eigen::VectorXd r(n), s(n);
            for (int i = 0; i < n; ++i) {
                r[i] = u(rng);
                s[i] = u(rng);
            }
            Eigen::VectorXd start = exact_ruled_flow(*rf, 0.0, r, s);
            CHECK((start - level_parameterization(*rf, 0.0, r, s)).cwiseAbs().maxCoeff() ==
                  0.0);
            Trajectory traj = integrate(rf->field, start, 1.0, 100);
            REQUIRE_FALSE(traj.truncated());
            double err = 0.0;
            for (std::size_t k = 0; k < traj.times.size(); ++k)
                err = std::max(err, (traj.points[k] - exact_ruled_flow(*rf, traj.times[k], r, s))
                                        .cwiseAbs()
                                        .maxCoeff());
            CHECK(err <= 1e-6);
        }
    }
}

TEST_CASE("time reversal returns to the start") {
    FieldSpec heli = builtin_helicoid3();
    Eigen::VectorXd start = vec({0.4, 1.2, -0.3});
    Trajectory fwd = integrate(heli, start, 0.8, 80);
    REQUIRE_FALSE(fwd.truncated());
    Trajectory back = integrate(heli, fwd.points.back(), -0.8, 80);
    REQUIRE_FALSE(back.truncated());
    CHECK((back.points.back() - start).cwiseAbs().maxCoeff() <= 1e-7);

    FieldSpec det2 = builtin_symdet(2);
    Eigen::VectorXd e0 = symdet_idempotent(2, 0);
    Trajectory f2 = integrate(det2, e0, 0.3, 40);
    REQUIRE_FALSE(f2.truncated());
    Trajectory b2 = integrate(det2, f2.points.back(), -0.3, 40);
    REQUIRE_FALSE(b2.truncated());
    CHECK((b2.points.back() - e0).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("flow report: residuals and measured order") {
    FieldSpec heli = builtin_helicoid3();
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::VectorXd> starts;
    for (int t = 0; t < 10; ++t) starts.push_back(vec({u(rng), 1.0 + 0.3 * u(rng), u(rng)}));
    auto rep = flow_report(heli, starts, 1.0, 100);
    CHECK(rep.max_linearity_residual <= 1e-8);
    CHECK(rep.truncated_count == 0);
    // the helicoid flow is a straight line: RK4 is exact, no measurable order
    CHECK_FALSE(rep.order_measurable);

    // coarse stepping: large residual reported, not an error
    auto coarse = flow_report(builtin_symdet(2), {symdet_idempotent(2, 0)}, 1.2, 1);
    CHECK(coarse.max_linearity_residual > 1e-4);

    // the determinant cone flow is curved; RK4 shows fourth order
    std::vector<Eigen::VectorXd> cone_starts = {symdet_idempotent(2, 0)};
    auto cone = flow_report(builtin_symdet(2), cone_starts, 0.8, 12);
    CHECK(cone.order_measurable);
    CHECK(cone.convergence_order >= 3.5);
    CHECK(cone.convergence_order <= 4.5);
}

TEST_CASE("symdet flow moves levels toward the cone boundary") {
    FieldSpec det2 = builtin_symdet(2);
    Trajectory traj = integrate(det2, symdet_idempotent(2, 0), 0.4, 40);
    REQUIRE_FALSE(traj.truncated());
    for (std::size_t k = 1; k < traj.F_values.size(); ++k)
        CHECK(traj.F_values[k] < traj.F_values[k - 1]);
    // nm = -2^{-3/4} Euler at E_0: the first step moves radially inward
    CHECK(traj.points.back().cwiseAbs().maxCoeff() < 1.0);
}

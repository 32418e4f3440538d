#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "eqa/errors.hpp"
#include "eqa/expr.hpp"
#include "eqa/field.hpp"

using namespace eqa;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double e : v) x[i++] = e;
    return x;
}
}  // namespace

TEST_CASE("parser accepts the paper fields") {
    const std::vector<std::string> uvw = {"u", "x", "y"};
    Ast heli = parse("x*sin(u)+y*cos(u)", 3, uvw);
    CHECK(eval_ast(heli, vec({M_PI / 2, 2, 5}), 1).value() == doctest::Approx(2.0));

    std::vector<std::string> xs;
    for (int i = 1; i <= 5; ++i) xs.push_back("x" + std::to_string(i));
    Ast gn = parse("x1^2*x3 + x1*x2*x4 + x2^2*x5", 5, xs);
    CHECK(eval_ast(gn, vec({1, 2, 1, 1, 1}), 1).value() == doctest::Approx(1 + 2 + 4));
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        parse("sin(", 1, {"x"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse("x + blob(2)", 1, {"x"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);  // unknown identifier 'blob'
    }
    CHECK_THROWS_AS(parse("", 1, {"x"}), ParseError);
    CHECK_THROWS_AS(parse("x^y", 2, {"x", "y"}), ParseError);  // exponent must be literal
}

TEST_CASE("precedence and associativity") {
    const std::vector<std::string> v = {"x", "y"};
    // ^ binds tighter than unary minus: -x^2 = -(x^2)
    CHECK(eval_ast(parse("-x^2", 2, v), vec({3, 0}), 1).value() == doctest::Approx(-9.0));
    // left-associative subtraction
    CHECK(eval_ast(parse("8-4-2", 2, v), vec({0, 0}), 1).value() == doctest::Approx(2.0));
    // right-associative power folds to a literal
    CHECK(eval_ast(parse("x^2^3", 2, v), vec({2, 0}), 1).value() == doctest::Approx(256.0));
    // unary minus binds tighter than *
    CHECK(eval_ast(parse("-x*y", 2, v), vec({2, 3}), 1).value() == doctest::Approx(-6.0));
    // whitespace-insensitive
    CHECK(parse("  x * y\t+ 1 ", 2, v).structurally_equal(parse("x*y+1", 2, v)));
}

TEST_CASE("pretty-print round-trips structurally on a golden corpus") {
    const std::vector<std::string> v = {"x", "y", "z"};
    const std::vector<std::string> corpus = {
        "x", "1.5", "x+y", "x-y-z", "x*y*z", "x/y/z", "-x", "--x", "-(x+y)", "x^2",
        "x^-2", "x^0.5", "(x+y)*z", "x*(y+z)", "x-(y-z)", "x/(y+2)", "sin(x)",
        "cos(x+y)", "tan(x)", "sinh(x*y)", "cosh(x)^2", "tanh(x)", "sech(x)",
        "exp(x+1)", "log(x+3)", "sqrt(x+4)", "abs(x+1)", "sign(x+1)",
        "x*sin(y)+z*cos(y)", "x^2*y + x*y^2", "1/(2+cos(x))", "-x^2+y",
        "(x+y)^3", "2*x^4-3*x^2+1", "x^2^2", "sin(cos(x))", "x*y/(z+4)",
        "sqrt(x^2+y^2+1)", "exp(-x^2)", "x/(y*z+5)", "0.25*x", "x*0.5+y/4",
        "sech(x)*cos(y*cosh(x)^2)", "tanh(x)*z", "abs(x^3+2)", "-sin(x)*y",
        "(x-y)/(x+y+10)", "log(exp(x)+1)", "x^3-y^3", "sign(x-5)*y"};
    CHECK(corpus.size() == 50);
    for (const auto& s : corpus) {
        Ast a = parse(s, 3, v);
        Ast b = parse(pretty(a, v), 3, v);
        CAPTURE(s);
        CAPTURE(pretty(a, v));
        CHECK(a.structurally_equal(b));
    }
}

TEST_CASE("evaluation is deterministic") {
    Ast a = parse("sin(x)*cosh(y)/(2+x^2)", 2, {"x", "y"});
    Jet j1 = eval_ast(a, vec({0.3, -0.4}), 4);
    Jet j2 = eval_ast(a, vec({0.3, -0.4}), 4);
    CHECK(j1.coeffs() == j2.coeffs());
}

TEST_CASE("builtins evaluate their documented closed forms") {
    FieldSpec heli = builtin_helicoid3();
    CHECK(heli.eval(vec({M_PI / 2, 2, 5}), 0).value() == doctest::Approx(2.0));

    FieldSpec genhel = builtin_genhel(Ast::constant(0.0));
    CHECK(genhel.eval(vec({0, 0, 0, 0, 1}), 0).value() == doctest::Approx(0.0));
    CHECK(genhel.eval(vec({0, 0, 1, 0, 0}), 0).value() == doctest::Approx(1.0));

    FieldSpec det2 = builtin_symdet(2);
    CHECK(det2.eval(symdet_idempotent(2, 0), 0).value() == doctest::Approx(1.0));
    // P = x11 x22 - (x12)^2 / 2 in the scaled coordinates
    CHECK(det2.eval(vec({2, 3, 1}), 0).value() == doctest::Approx(2 * 3 - 0.5));

    FieldSpec parab = builtin_paraboloid(2);
    CHECK(parab.eval(vec({1, 2, 4}), 0).value() == doctest::Approx(4 - (1 + 4) / 2.0));

    CHECK_THROWS_AS(make_builtin("nosuch"), ArgumentError);
    CHECK_THROWS_AS(make_builtin("symdet", {}), ArgumentError);
}

TEST_CASE("symdet coordinates embed the 2^{-1/2} off-diagonal scaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    FieldSpec det3 = builtin_symdet(3);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::MatrixXd x(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) x(i, j) = x(j, i) = u(rng);
        Eigen::VectorXd p = symdet_coords_from_matrix(x);
        CHECK(det3.eval(p, 0).value() == doctest::Approx(x.determinant()).epsilon(1e-12));
        CHECK((symdet_matrix_from_coords(p) - x).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("printable builtins agree with their parsed printed form") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.3, 1.5);
    std::vector<FieldSpec> fields = {builtin_helicoid3(), builtin_symdet(2), builtin_symdet(3),
                                     builtin_paraboloid(3),
                                     builtin_genhel(parse("x1*x2", 2, {"x1", "x2"}))};
    for (const auto& f : fields) {
        REQUIRE(f.printable());
        FieldSpec reparsed = field_from_expr(f.printed(), f.var_names, f.name + "-reparsed");
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd p(f.dim);
            for (int i = 0; i < f.dim; ++i) p[i] = u(rng);
            const double a = f.eval(p, 0).value();
            const double b = reparsed.eval(p, 0).value();
            CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("cheng_yau potential is defined where P > 0") {
    FieldSpec f = builtin_cheng_yau_det(2);
    // at E_0, P = 1 so F = (3/2) log(3/2)
    CHECK(f.eval(symdet_idempotent(2, 0), 0).value() ==
          doctest::Approx(1.5 * std::log(1.5)));
    Eigen::VectorXd indef(3);
    indef << 1.0, -1.0, 0.0;  // diag(1,-1): P = -1
    CHECK_THROWS_AS(f.eval(indef, 0), DomainError);
}

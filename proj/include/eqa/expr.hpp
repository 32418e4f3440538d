#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

#include "eqa/jet.hpp"

namespace eqa {

enum class Fn { Sin, Cos, Tan, Sinh, Cosh, Tanh, Sech, Exp, Log, Sqrt, Abs, Sign };

const char* fn_name(Fn f);

/// Expression tree for scalar fields. Power nodes keep a literal exponent;
/// integer exponents evaluate by repeated squaring, real ones require a
/// positive base at evaluation time.
struct Ast {
    enum class Kind { Constant, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind = Kind::Constant;
    double value = 0.0;           // Constant
    int var = -1;                 // Var
    Fn fn = Fn::Sin;              // Call
    double exponent = 0.0;        // Pow
    bool exponent_is_int = false; // Pow
    std::vector<Ast> kids;

    static Ast constant(double v);
    static Ast variable(int index);
    static Ast neg(Ast a);
    static Ast add(Ast a, Ast b);
    static Ast sub(Ast a, Ast b);
    static Ast mul(Ast a, Ast b);
    static Ast div(Ast a, Ast b);
    static Ast pow(Ast base, double exponent);
    static Ast call(Fn f, Ast a);

    bool structurally_equal(const Ast& other) const;
};

/// Parse `text` over the named variables. Standard precedence
/// (^ > unary - > * / > + -), left-associative binaries, right-associative ^,
/// whitespace-insensitive. Throws ParseError with a 0-based byte offset.
Ast parse(const std::string& text, int dim, const std::vector<std::string>& var_names);

/// Minimal-parenthesis rendering; parse(pretty(a)) is structurally equal to a.
std::string pretty(const Ast& ast, const std::vector<std::string>& var_names);

/// Replace every variable i by replacements[i] (an Ast over a new variable
/// space). Used to compose immersion components.
Ast substitute(const Ast& ast, const std::vector<Ast>& replacements);

/// Evaluate as a jet at `point`, exact to `order`.
Jet eval_ast(const Ast& ast, const Eigen::VectorXd& point, int order);

}  // namespace eqa

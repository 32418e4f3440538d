#include "eqa/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "eqa/errors.hpp"

namespace eqa {

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Tanh: return "tanh";
        case Fn::Sech: return "sech";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
        case Fn::Sign: return "sign";
    }
    return "?";
}

Ast Ast::constant(double v) {
    Ast a;
    a.kind = Kind::Constant;
    a.value = v;
    return a;
}
Ast Ast::variable(int index) {
    Ast a;
    a.kind = Kind::Var;
    a.var = index;
    return a;
}
Ast Ast::neg(Ast x) {
    Ast a;
    a.kind = Kind::Neg;
    a.kids.push_back(std::move(x));
    return a;
}
static Ast binary(Ast::Kind k, Ast x, Ast y) {
    Ast a;
    a.kind = k;
    a.kids.push_back(std::move(x));
    a.kids.push_back(std::move(y));
    return a;
}
Ast Ast::add(Ast x, Ast y) { return binary(Kind::Add, std::move(x), std::move(y)); }
Ast Ast::sub(Ast x, Ast y) { return binary(Kind::Sub, std::move(x), std::move(y)); }
Ast Ast::mul(Ast x, Ast y) { return binary(Kind::Mul, std::move(x), std::move(y)); }
Ast Ast::div(Ast x, Ast y) { return binary(Kind::Div, std::move(x), std::move(y)); }
Ast Ast::pow(Ast base, double exponent) {
    Ast a;
    a.kind = Kind::Pow;
    a.kids.push_back(std::move(base));
    a.exponent = exponent;
    a.exponent_is_int = exponent == std::floor(exponent) && std::abs(exponent) < 1e15;
    return a;
}
Ast Ast::call(Fn f, Ast x) {
    Ast a;
    a.kind = Kind::Call;
    a.fn = f;
    a.kids.push_back(std::move(x));
    return a;
}

bool Ast::structurally_equal(const Ast& o) const {
    if (kind != o.kind || kids.size() != o.kids.size()) return false;
    switch (kind) {
        case Kind::Constant:
            if (value != o.value) return false;
            break;
        case Kind::Var:
            if (var != o.var) return false;
            break;
        case Kind::Pow:
            if (exponent != o.exponent || exponent_is_int != o.exponent_is_int) return false;
            break;
        case Kind::Call:
            if (fn != o.fn) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (!kids[i].structurally_equal(o.kids[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent with 0-based byte offsets.
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    int dim;
    const std::vector<std::string>& vars;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
        throw ParseError(msg + " at offset " + std::to_string(pos), pos, expected);
    }

    Ast parse_expr() {
        Ast lhs = parse_term();
        for (;;) {
            skip_ws();
            if (pos < src.size() && src[pos] == '+') {
                ++pos;
                lhs = Ast::add(std::move(lhs), parse_term());
            } else if (pos < src.size() && src[pos] == '-') {
                ++pos;
                lhs = Ast::sub(std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    Ast parse_term() {
        Ast lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (pos < src.size() && src[pos] == '*') {
                ++pos;
                lhs = Ast::mul(std::move(lhs), parse_unary());
            } else if (pos < src.size() && src[pos] == '/') {
                ++pos;
                lhs = Ast::div(std::move(lhs), parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Ast parse_unary() {
        skip_ws();
        if (pos < src.size() && src[pos] == '-') {
            ++pos;
            return Ast::neg(parse_unary());
        }
        return parse_power();
    }

    Ast parse_power() {
        Ast base = parse_atom();
        skip_ws();
        if (pos < src.size() && src[pos] == '^') {
            ++pos;
            const std::size_t at = pos;
            // exponent: optional sign, then a literal or a parenthesized power
            // chain of literals; must fold to a constant
            Ast e = parse_exponent();
            double folded;
            if (!fold_constant(e, folded))
                throw ParseError("exponent must be a numeric literal at offset " +
                                     std::to_string(at),
                                 at, "numeric literal");
            return Ast::pow(std::move(base), folded);
        }
        return base;
    }

    Ast parse_exponent() {
        skip_ws();
        if (pos < src.size() && src[pos] == '-') {
            ++pos;
            return Ast::neg(parse_exponent());
        }
        Ast base = parse_atom();
        skip_ws();
        if (pos < src.size() && src[pos] == '^') {  // right-associative
            ++pos;
            Ast e = parse_exponent();
            double folded;
            if (!fold_constant(e, folded))
                fail("exponent must be a numeric literal", "numeric literal");
            return Ast::pow(std::move(base), folded);
        }
        return base;
    }

    static bool fold_constant(const Ast& a, double& out) {
        switch (a.kind) {
            case Ast::Kind::Constant:
                out = a.value;
                return true;
            case Ast::Kind::Neg: {
                double inner;
                if (!fold_constant(a.kids[0], inner)) return false;
                out = -inner;
                return true;
            }
            case Ast::Kind::Pow: {
                double base;
                if (!fold_constant(a.kids[0], base)) return false;
                out = std::pow(base, a.exponent);
                return true;
            }
            default:
                return false;
        }
    }

    Ast parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input", "number, identifier or '('");
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            Ast inner = parse_expr();
            if (!eat(')')) fail("unbalanced parenthesis", "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("unexpected character '" + std::string(1, c) + "'", "number, identifier or '('");
    }

    Ast parse_number() {
        const char* begin = src.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number", "numeric literal");
        pos += static_cast<std::size_t>(end - begin);
        return Ast::constant(v);
    }

    Ast parse_identifier() {
        const std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name = src.substr(start, pos - start);

        static const std::map<std::string, Fn> fns = {
            {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},  {"sinh", Fn::Sinh},
            {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"sech", Fn::Sech}, {"exp", Fn::Exp},
            {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs},  {"sign", Fn::Sign}};

        skip_ws();
        const bool is_call = pos < src.size() && src[pos] == '(';
        if (is_call) {
            auto fit = fns.find(name);
            if (fit != fns.end()) {
                ++pos;  // '('
                Ast arg = parse_expr();
                if (!eat(')')) fail("unbalanced parenthesis in call", "')'");
                return Ast::call(fit->second, std::move(arg));
            }
        }
        for (int i = 0; i < static_cast<int>(vars.size()); ++i)
            if (vars[i] == name) return Ast::variable(i);
        throw ParseError("unknown identifier '" + name + "' at offset " + std::to_string(start),
                         start, "variable or function name");
    }
};

}  // namespace

Ast parse(const std::string& text, int dim, const std::vector<std::string>& var_names) {
    if (text.empty()) throw ParseError("empty expression", 0, "expression");
    if (static_cast<int>(var_names.size()) != dim)
        throw ArgumentError("parse: var_names size must equal dim");
    Parser p{text, 0, dim, var_names};
    Ast a = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw ParseError("trailing input at offset " + std::to_string(p.pos), p.pos,
                         "end of input");
    return a;
}

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

namespace {

int precedence(const Ast& a) {
    switch (a.kind) {
        case Ast::Kind::Add:
        case Ast::Kind::Sub: return 1;
        case Ast::Kind::Mul:
        case Ast::Kind::Div: return 2;
        case Ast::Kind::Neg: return 3;
        case Ast::Kind::Pow: return 4;
        default: return 5;
    }
}

std::string format_double(double v) {
    // shortest decimal that parses back to the same double
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream ss;
        ss.precision(prec);
        ss << v;
        if (std::strtod(ss.str().c_str(), nullptr) == v) return ss.str();
    }
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

void print(const Ast& a, const std::vector<std::string>& vars, int parent_prec, std::string& out) {
    const int prec = precedence(a);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (a.kind) {
        case Ast::Kind::Constant:
            if (a.value < 0) {
                out += '(';
                out += format_double(a.value);
                out += ')';
            } else {
                out += format_double(a.value);
            }
            break;
        case Ast::Kind::Var:
            out += vars.at(a.var);
            break;
        case Ast::Kind::Neg:
            out += '-';
            print(a.kids[0], vars, 4, out);  // bind tighter than * but looser than ^
            break;
        case Ast::Kind::Add:
            print(a.kids[0], vars, 1, out);
            out += '+';
            print(a.kids[1], vars, 2, out);
            break;
        case Ast::Kind::Sub:
            print(a.kids[0], vars, 1, out);
            out += '-';
            print(a.kids[1], vars, 2, out);
            break;
        case Ast::Kind::Mul:
            print(a.kids[0], vars, 2, out);
            out += '*';
            print(a.kids[1], vars, 3, out);
            break;
        case Ast::Kind::Div:
            print(a.kids[0], vars, 2, out);
            out += '/';
            print(a.kids[1], vars, 3, out);
            break;
        case Ast::Kind::Pow:
            print(a.kids[0], vars, 5, out);
            out += '^';
            if (a.exponent < 0) {
                out += '-';
                out += format_double(-a.exponent);
            } else {
                out += format_double(a.exponent);
            }
            break;
        case Ast::Kind::Call:
            out += fn_name(a.fn);
            out += '(';
            print(a.kids[0], vars, 0, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string pretty(const Ast& ast, const std::vector<std::string>& var_names) {
    std::string out;
    print(ast, var_names, 0, out);
    return out;
}

Ast substitute(const Ast& ast, const std::vector<Ast>& replacements) {
    Ast out = ast;
    if (ast.kind == Ast::Kind::Var) {
        if (ast.var >= static_cast<int>(replacements.size()))
            throw ArgumentError("substitute: missing replacement for variable");
        return replacements[ast.var];
    }
    for (auto& kid : out.kids) kid = substitute(kid, replacements);
    return out;
}

// ---------------------------------------------------------------------------
// Jet evaluation
// ---------------------------------------------------------------------------

namespace {

Jet eval_node(const Ast& a, const std::vector<Jet>& seeds, int dim, int order) {
    switch (a.kind) {
        case Ast::Kind::Constant:
            return Jet::constant(dim, order, a.value);
        case Ast::Kind::Var:
            return seeds.at(a.var);
        case Ast::Kind::Neg:
            return -eval_node(a.kids[0], seeds, dim, order);
        case Ast::Kind::Add:
            return eval_node(a.kids[0], seeds, dim, order) +
                   eval_node(a.kids[1], seeds, dim, order);
        case Ast::Kind::Sub:
            return eval_node(a.kids[0], seeds, dim, order) -
                   eval_node(a.kids[1], seeds, dim, order);
        case Ast::Kind::Mul:
            return eval_node(a.kids[0], seeds, dim, order) *
                   eval_node(a.kids[1], seeds, dim, order);
        case Ast::Kind::Div:
            return eval_node(a.kids[0], seeds, dim, order) /
                   eval_node(a.kids[1], seeds, dim, order);
        case Ast::Kind::Pow: {
            Jet base = eval_node(a.kids[0], seeds, dim, order);
            if (a.exponent_is_int) return base.pow_int(static_cast<long long>(a.exponent));
            return pow(base, a.exponent);
        }
        case Ast::Kind::Call: {
            Jet arg = eval_node(a.kids[0], seeds, dim, order);
            switch (a.fn) {
                case Fn::Sin: return sin(arg);
                case Fn::Cos: return cos(arg);
                case Fn::Tan: return tan(arg);
                case Fn::Sinh: return sinh(arg);
                case Fn::Cosh: return cosh(arg);
                case Fn::Tanh: return tanh(arg);
                case Fn::Sech: return sech(arg);
                case Fn::Exp: return exp(arg);
                case Fn::Log: return log(arg);
                case Fn::Sqrt: return sqrt(arg);
                case Fn::Abs: return abs(arg);
                case Fn::Sign: return sign(arg);
            }
            throw ArgumentError("eval_ast: unknown function");
        }
    }
    throw ArgumentError("eval_ast: unknown node kind");
}

}  // namespace

Jet eval_ast(const Ast& ast, const Eigen::VectorXd& point, int order) {
    const int dim = static_cast<int>(point.size());
    std::vector<Jet> seeds;
    seeds.reserve(dim);
    for (int v = 0; v < dim; ++v) seeds.push_back(Jet::seed(point, v, order));
    return eval_node(ast, seeds, dim, order);
}

}  // namespace eqa

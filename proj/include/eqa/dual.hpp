#pragma once

#include <Eigen/Core>

#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

/// First-order smooth scalar: a value together with its gradient with
/// respect to the ambient coordinates. Running the invariant pipeline over
/// Dual instead of double differentiates every derived quantity once more,
/// exactly (no finite differencing).
///
/// A Dual with an empty gradient is a dimension-free constant and promotes
/// on contact, so plain double literals mix freely in generic code.
struct Dual {
    double v = 0.0;
    Eigen::VectorXd g;  // empty <=> constant

    Dual() = default;
    /*implicit*/ Dual(double value) : v(value) {}
    Dual(double value, Eigen::VectorXd grad) : v(value), g(std::move(grad)) {}

    static Dual constant(double value, int dim) { return Dual(value, Eigen::VectorXd::Zero(dim)); }
    static Dual variable(double value, int dim, int index) {
        Dual d = constant(value, dim);
        d.g[index] = 1.0;
        return d;
    }

    bool is_constant() const { return g.size() == 0; }

    Dual& operator+=(const Dual& b) { return *this = *this + b; }
    Dual& operator-=(const Dual& b) { return *this = *this - b; }
    Dual& operator*=(const Dual& b) { return *this = *this * b; }
    Dual& operator/=(const Dual& b) { return *this = *this / b; }
    bool operator==(const Dual& b) const { return v == b.v && g == b.g; }

    friend Dual operator-(const Dual& a) { return {-a.v, -a.g}; }
    friend Dual operator+(const Dual& a) { return a; }

    friend Dual operator+(const Dual& a, const Dual& b) {
        if (a.is_constant()) return {a.v + b.v, b.g};
        if (b.is_constant()) return {a.v + b.v, a.g};
        return {a.v + b.v, a.g + b.g};
    }
    friend Dual operator-(const Dual& a, const Dual& b) {
        if (a.is_constant()) return {a.v - b.v, -b.g};
        if (b.is_constant()) return {a.v - b.v, a.g};
        return {a.v - b.v, a.g - b.g};
    }
    friend Dual operator*(const Dual& a, const Dual& b) {
        if (a.is_constant()) return {a.v * b.v, a.v * b.g};
        if (b.is_constant()) return {a.v * b.v, b.v * a.g};
        return {a.v * b.v, a.v * b.g + b.v * a.g};
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        if (b.v == 0.0) throw SingularPointError("dual division by zero value");
        const double inv = 1.0 / b.v;
        if (b.is_constant()) return {a.v * inv, inv * a.g};
        const double q = a.v * inv;
        if (a.is_constant()) return {q, (-q * inv) * b.g};
        return {q, inv * a.g - (q * inv) * b.g};
    }
};

inline Dual abs(const Dual& x) {
    if (x.v == 0.0) throw DomainError("abs of a dual with zero value", 0.0);
    return x.v > 0.0 ? x : -x;
}
inline Dual sign(const Dual& x) {
    if (x.v == 0.0) throw DomainError("sign of a dual with zero value", 0.0);
    return Dual(x.v > 0.0 ? 1.0 : -1.0);
}
inline Dual pow(const Dual& x, double a) {
    if (x.v <= 0.0) throw DomainError("real power of a nonpositive dual", x.v);
    const double p = std::pow(x.v, a);
    return {p, (a * p / x.v) * x.g};
}
inline Dual sqrt(const Dual& x) { return pow(x, 0.5); }
inline Dual log(const Dual& x) {
    if (x.v <= 0.0) throw DomainError("log of a nonpositive dual", x.v);
    return {std::log(x.v), x.g / x.v};
}
inline Dual exp(const Dual& x) {
    const double e = std::exp(x.v);
    return {e, e * x.g};
}

}  // namespace eqa

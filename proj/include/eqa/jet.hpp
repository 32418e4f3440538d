#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "eqa/errors.hpp"

namespace eqa {

inline constexpr int kMaxJetDim = 12;
inline constexpr int kMaxJetOrder = 4;

/// Exponent tuple of a monomial x^alpha. Total degree = sum of entries.
struct MultiIndex {
    std::vector<int> exponents;

    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }
    int dim() const { return static_cast<int>(exponents.size()); }
    bool operator==(const MultiIndex&) const = default;
};

/// Graded-lexicographic comparison: lower total degree first, then
/// lexicographic on the exponent tuple within a degree.
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents > b.exponents;  // larger leading exponent enumerates first
}

namespace detail {

/// Shared coefficient layout for all jets of a given (dim, order):
/// the graded-lex enumeration of multi-indices of degree <= order, a
/// ranking map, and the index-pair product table used by multiplication.
class JetLayout {
  public:
    int dim;
    int order;
    int size;                            // number of stored coefficients
    std::vector<MultiIndex> index;       // flat slot -> exponents
    std::vector<int> degree;             // flat slot -> total degree
    std::vector<int> var_slot;           // variable i -> slot of the linear monomial x_i
    std::vector<int32_t> product_slot;   // [i*size + j] -> slot of index[i]+index[j], or -1

    int rank(const MultiIndex& alpha) const {
        auto it = rank_.find(alpha.exponents);
        return it == rank_.end() ? -1 : it->second;
    }

    static const JetLayout& get(int dim, int order);

  private:
    JetLayout(int dim, int order);
    std::map<std::vector<int>, int> rank_;
};

inline JetLayout::JetLayout(int d, int k) : dim(d), order(k) {
    std::vector<MultiIndex> all;
    MultiIndex cur{std::vector<int>(d, 0)};
    // enumerate all exponent tuples of degree <= k
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == d) {
            all.push_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur.exponents[pos] = e;
            rec(pos + 1, remaining - e);
        }
        cur.exponents[pos] = 0;
    };
    rec(0, k);
    std::sort(all.begin(), all.end(), graded_lex_less);

    size = static_cast<int>(all.size());
    index = std::move(all);
    degree.resize(size);
    for (int i = 0; i < size; ++i) {
        degree[i] = index[i].degree();
        rank_[index[i].exponents] = i;
    }
    var_slot.assign(d, -1);
    for (int v = 0; v < d; ++v) {
        MultiIndex lin{std::vector<int>(d, 0)};
        lin.exponents[v] = 1;
        var_slot[v] = rank(lin);
    }
    product_slot.assign(static_cast<std::size_t>(size) * size, -1);
    std::vector<int> sum(d);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (degree[i] + degree[j] > k) continue;
            for (int v = 0; v < d; ++v) sum[v] = index[i].exponents[v] + index[j].exponents[v];
            auto it = rank_.find(sum);
            product_slot[static_cast<std::size_t>(i) * size + j] = it->second;
        }
    }
}

inline const JetLayout& JetLayout::get(int dim, int order) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(dim, order);
    auto it = cache.find(key);
    if (it == cache.end()) {
        if (dim < 1 || dim > kMaxJetDim)
            throw ArgumentError("jet dimension out of range [1, 12]: " + std::to_string(dim));
        if (order < 0 || order > kMaxJetOrder)
            throw ArgumentError("jet order out of range [0, 4]: " + std::to_string(order));
        it = cache.emplace(key, std::unique_ptr<JetLayout>(new JetLayout(dim, order))).first;
    }
    return *it->second;
}

}  // namespace detail

/// Truncated multivariate Taylor expansion about a base point.
///
/// Coefficients are stored densely in graded-lex order; the coefficient of
/// x^alpha equals the partial derivative divided by alpha!. A layout-less
/// jet represents a dimension-free constant and promotes on contact with
/// any sized jet, so jets can be used as scalars in generic code.
class Jet {
  public:
    Jet() : layout_(nullptr), const_(0.0) {}
    /*implicit*/ Jet(double c) : layout_(nullptr), const_(c) {}

    static Jet constant(int dim, int order, double value) {
        Jet j(dim, order);
        j.c_[0] = value;
        return j;
    }

    /// Jet of the coordinate function x_var at `point`.
    static Jet seed(const Eigen::VectorXd& point, int var, int order) {
        const int dim = static_cast<int>(point.size());
        if (dim < 1 || dim > kMaxJetDim)
            throw ArgumentError("seed: dimension out of range");
        if (var < 0 || var >= dim)
            throw ArgumentError("seed: variable index " + std::to_string(var) +
                                " out of range for dimension " + std::to_string(dim));
        if (order < 1 || order > kMaxJetOrder)
            throw ArgumentError("seed: order out of range [1, 4]");
        Jet j(dim, order);
        j.c_[0] = point[var];
        j.c_[j.layout_->var_slot[var]] = 1.0;
        return j;
    }

    bool is_constant() const { return layout_ == nullptr; }
    int dim() const { return layout_ ? layout_->dim : 0; }
    int order() const { return layout_ ? layout_->order : 0; }
    double value() const { return layout_ ? c_[0] : const_; }

    const Eigen::VectorXd& coeffs() const {
        if (!layout_) throw ArgumentError("coeffs(): jet is a dimension-free constant");
        return c_;
    }

    /// Taylor coefficient of x^alpha (derivative / alpha!).
    double coeff(const MultiIndex& alpha) const {
        if (!layout_) {
            if (alpha.degree() == 0) return const_;
            throw ArgumentError("coeff: jet is a dimension-free constant");
        }
        const int r = layout_->rank(alpha);
        if (r < 0) throw ArgumentError("coeff: multi-index degree exceeds jet order");
        return c_[r];
    }

    /// Partial derivative d^alpha F at the base point, i.e. alpha! * coeff.
    double derivative(const MultiIndex& alpha) const {
        double fact = 1.0;
        for (int e : alpha.exponents)
            for (int q = 2; q <= e; ++q) fact *= q;
        return fact * coeff(alpha);
    }

    Eigen::VectorXd gradient() const {
        require_layout("gradient");
        Eigen::VectorXd g(layout_->dim);
        for (int v = 0; v < layout_->dim; ++v) g[v] = c_[layout_->var_slot[v]];
        return g;
    }

    /// Jet of the partial derivative d^alpha F, truncated to `new_order`.
    /// Requires degree(alpha) + new_order <= order.
    Jet derivative_jet(const MultiIndex& alpha, int new_order) const {
        require_layout("derivative_jet");
        const int da = alpha.degree();
        if (da + new_order > layout_->order)
            throw ArgumentError("derivative_jet: requested order exceeds available jet order");
        const auto& out_layout = detail::JetLayout::get(layout_->dim, new_order);
        Jet out(layout_->dim, new_order);
        std::vector<int> shifted(layout_->dim);
        for (int s = 0; s < out_layout.size; ++s) {
            const auto& beta = out_layout.index[s].exponents;
            double scale = 1.0;
            for (int v = 0; v < layout_->dim; ++v) {
                shifted[v] = beta[v] + alpha.exponents[v];
                // (alpha+beta)! / beta! accounts for re-centering the series
                for (int q = beta[v] + 1; q <= shifted[v]; ++q) scale *= q;
            }
            out.c_[s] = scale * c_[layout_->rank(MultiIndex{shifted})];
        }
        return out;
    }

    /// Truncation to a lower order (same dimension).
    Jet truncated(int new_order) const {
        require_layout("truncated");
        if (new_order > layout_->order) throw ArgumentError("truncated: cannot raise order");
        if (new_order == layout_->order) return *this;
        const auto& out_layout = detail::JetLayout::get(layout_->dim, new_order);
        Jet out(layout_->dim, new_order);
        out.c_ = c_.head(out_layout.size);
        return out;
    }

    friend Jet operator-(const Jet& a) {
        Jet r = a;
        if (r.layout_) r.c_ = -r.c_;
        else r.const_ = -r.const_;
        return r;
    }
    friend Jet operator+(const Jet& a, const Jet& b) { return combine(a, b, 1.0); }
    friend Jet operator-(const Jet& a, const Jet& b) { return combine(a, b, -1.0); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        if (!a.layout_ && !b.layout_) return Jet(a.const_ * b.const_);
        if (!a.layout_) return scale(b, a.const_);
        if (!b.layout_) return scale(a, b.const_);
        const auto* L = a.matched_layout(b, "mul");
        Jet r(L->dim, L->order);
        const int n = L->size;
        const auto* tab = L->product_slot.data();
        for (int i = 0; i < n; ++i) {
            const double ai = a.c_[i];
            if (ai == 0.0) continue;
            const auto* row = tab + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) {
                const int32_t t = row[j];
                if (t >= 0) r.c_[t] += ai * b.c_[j];
            }
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

    Jet& operator+=(const Jet& b) { return *this = *this + b; }
    Jet& operator-=(const Jet& b) { return *this = *this - b; }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }
    Jet& operator/=(const Jet& b) { return *this = *this / b; }
    bool operator==(const Jet& b) const {
        if (layout_ != b.layout_) return false;
        return layout_ ? c_ == b.c_ : const_ == b.const_;
    }

    /// 1/this; requires a nonzero constant term.
    Jet reciprocal() const {
        if (!layout_) {
            if (const_ == 0.0) throw SingularPointError("division by zero constant jet");
            return Jet(1.0 / const_);
        }
        if (c_[0] == 0.0)
            throw SingularPointError("division by a jet with vanishing constant term");
        const double inv = 1.0 / c_[0];
        // geometric series in the nilpotent part
        std::array<double, kMaxJetOrder + 1> series{};
        double p = inv;
        for (int d = 0; d <= layout_->order; ++d) {
            series[d] = p;
            p *= -inv;
        }
        return compose_series(series);
    }

    /// Composition with a univariate analytic function given by the Taylor
    /// coefficients of f about this jet's constant term:
    /// series[d] = f^(d)(c0) / d!.
    Jet compose_series(const std::array<double, kMaxJetOrder + 1>& series) const {
        require_layout("compose_series");
        Jet dx = *this;
        dx.c_[0] = 0.0;
        Jet r = Jet::constant(layout_->dim, layout_->order, series[layout_->order]);
        for (int d = layout_->order - 1; d >= 0; --d) {  // Horner
            r = r * dx;
            r.c_[0] += series[d];
        }
        return r;
    }

    /// Integer power by repeated squaring (negative exponents via reciprocal).
    Jet pow_int(long long e) const {
        if (e < 0) return reciprocal().pow_int(-e);
        Jet acc(1.0);
        Jet base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        if (acc.is_constant() && layout_) return constant(layout_->dim, layout_->order, acc.value());
        return acc;
    }

  private:
    Jet(int dim, int order)
        : layout_(&detail::JetLayout::get(dim, order)), c_(Eigen::VectorXd::Zero(layout_->size)) {}

    void require_layout(const char* what) const {
        if (!layout_) throw ArgumentError(std::string(what) + ": jet is a dimension-free constant");
    }

    const detail::JetLayout* matched_layout(const Jet& b, const char* what) const {
        if (layout_ != b.layout_)
            throw ArgumentError(std::string("jet ") + what + ": mismatched dimension or order");
        return layout_;
    }

    static Jet scale(const Jet& a, double s) {
        Jet r = a;
        if (r.layout_) r.c_ *= s;
        else r.const_ *= s;
        return r;
    }

    static Jet combine(const Jet& a, const Jet& b, double sign) {
        if (!a.layout_ && !b.layout_) return Jet(a.const_ + sign * b.const_);
        if (!a.layout_) {
            Jet r = scale(b, sign);
            r.c_[0] += a.const_;
            return r;
        }
        if (!b.layout_) {
            Jet r = a;
            r.c_[0] += sign * b.const_;
            return r;
        }
        const auto* L = a.matched_layout(b, "add");
        Jet r(L->dim, L->order);
        r.c_ = a.c_ + sign * b.c_;
        return r;
    }

    const detail::JetLayout* layout_;
    Eigen::VectorXd c_;
    double const_ = 0.0;  // used only when layout_ == nullptr
};

// ---------------------------------------------------------------------------
// Elementary functions, exact to the jet order via univariate composition.
// ---------------------------------------------------------------------------

namespace detail {

using Series = std::array<double, kMaxJetOrder + 1>;

inline Series sin_series(double c) {
    const double s = std::sin(c), co = std::cos(c);
    return {s, co, -s / 2.0, -co / 6.0, s / 24.0};
}
inline Series cos_series(double c) {
    const double s = std::sin(c), co = std::cos(c);
    return {co, -s, -co / 2.0, s / 6.0, co / 24.0};
}
inline Series exp_series(double c) {
    const double e = std::exp(c);
    return {e, e, e / 2.0, e / 6.0, e / 24.0};
}
inline Series sinh_series(double c) {
    const double s = std::sinh(c), ch = std::cosh(c);
    return {s, ch, s / 2.0, ch / 6.0, s / 24.0};
}
inline Series cosh_series(double c) {
    const double s = std::sinh(c), ch = std::cosh(c);
    return {ch, s, ch / 2.0, s / 6.0, ch / 24.0};
}
inline Series log_series(double c) {
    // log(c) + sum (-1)^(d+1) (x/c)^d / d
    Series out{};
    out[0] = std::log(c);
    double p = 1.0;
    for (int d = 1; d <= kMaxJetOrder; ++d) {
        p /= c;
        out[d] = ((d % 2) ? p : -p) / d;
    }
    return out;
}
inline Series pow_series(double c, double a) {
    // binomial series around c > 0
    Series out{};
    double coef = std::pow(c, a);
    out[0] = coef;
    for (int d = 1; d <= kMaxJetOrder; ++d) {
        coef *= (a - (d - 1)) / (d * c);
        out[d] = coef;
    }
    return out;
}
inline Series tanh_series(double c) {
    // t' = s2, s2' = -2 t s2 with s2 = sech^2
    const double t = std::tanh(c), s2 = 1.0 - t * t;
    const double d2 = -2.0 * t * s2;
    const double d3 = -2.0 * s2 * s2 + 4.0 * t * t * s2;
    const double d4 = 16.0 * t * s2 * s2 - 8.0 * t * t * t * s2;
    return {t, s2, d2 / 2.0, d3 / 6.0, d4 / 24.0};
}
inline Series sech_series(double c) {
    // f = sech: f' = -f t, t' = f^2
    const double f = 1.0 / std::cosh(c), t = std::tanh(c);
    const double d1 = -f * t;
    const double d2 = f * t * t - f * f * f;
    const double d3 = -f * t * t * t + 5.0 * f * f * f * t;
    const double d4 = f * t * t * t * t - 18.0 * f * f * f * t * t + 5.0 * std::pow(f, 5);
    return {f, d1, d2 / 2.0, d3 / 6.0, d4 / 24.0};
}

}  // namespace detail

inline Jet sin(const Jet& x) { return x.compose_series(detail::sin_series(x.value())); }
inline Jet cos(const Jet& x) { return x.compose_series(detail::cos_series(x.value())); }
inline Jet exp(const Jet& x) { return x.compose_series(detail::exp_series(x.value())); }
inline Jet sinh(const Jet& x) { return x.compose_series(detail::sinh_series(x.value())); }
inline Jet cosh(const Jet& x) { return x.compose_series(detail::cosh_series(x.value())); }
inline Jet tanh(const Jet& x) { return x.compose_series(detail::tanh_series(x.value())); }
inline Jet sech(const Jet& x) { return x.compose_series(detail::sech_series(x.value())); }
inline Jet tan(const Jet& x) { return sin(x) / cos(x); }

inline Jet log(const Jet& x) {
    if (x.value() <= 0.0) throw DomainError("log of a nonpositive jet", x.value());
    return x.compose_series(detail::log_series(x.value()));
}

inline Jet sqrt(const Jet& x) {
    if (x.value() <= 0.0) throw DomainError("sqrt of a nonpositive jet", x.value());
    return x.compose_series(detail::pow_series(x.value(), 0.5));
}

/// x^a for real a; requires a positive constant term.
inline Jet pow(const Jet& x, double a) {
    if (x.value() <= 0.0) throw DomainError("real power of a nonpositive jet", x.value());
    return x.compose_series(detail::pow_series(x.value(), a));
}

/// |x| away from zero: sign(c0) * x. Zero constant term is an error.
inline Jet abs(const Jet& x) {
    if (x.value() == 0.0) throw DomainError("abs of a jet with zero constant term", 0.0);
    return x.value() > 0.0 ? x : -x;
}

/// Locally constant sign; zero constant term is an error.
inline Jet sign(const Jet& x) {
    if (x.value() == 0.0) throw DomainError("sign of a jet with zero constant term", 0.0);
    return Jet(x.value() > 0.0 ? 1.0 : -1.0);
}

/// Composition F o G for a jet of F at y = (inner[0].value(), ...) and jets
/// of the components G_i at a common base point. All jets must share one
/// order; inner jets share one dimension.
inline Jet compose(const Jet& outer, const std::vector<Jet>& inner) {
    if (outer.is_constant()) throw ArgumentError("compose: outer jet must be sized");
    const int k = outer.order();
    if (static_cast<int>(inner.size()) != outer.dim())
        throw ArgumentError("compose: inner count must equal outer dimension");
    const int d = inner.front().dim();
    for (const Jet& g : inner)
        if (g.dim() != d || g.order() != k)
            throw ArgumentError("compose: inner jets must share dimension and order");

    // powers of the centered components
    std::vector<std::vector<Jet>> pw(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        Jet centered = inner[i] - Jet(inner[i].value());
        pw[i].push_back(Jet::constant(d, k, 1.0));
        for (int e = 1; e <= k; ++e) pw[i].push_back(pw[i][e - 1] * centered);
    }

    const auto& layout = detail::JetLayout::get(outer.dim(), k);
    Jet acc = Jet::constant(d, k, 0.0);
    for (int s = 0; s < layout.size; ++s) {
        const double c = outer.coeffs()[s];
        if (c == 0.0) continue;
        Jet term(c);
        for (int v = 0; v < outer.dim(); ++v) {
            const int e = layout.index[s].exponents[v];
            if (e > 0) term = term * pw[v][e];
        }
        if (term.is_constant())
            acc += Jet::constant(d, k, term.value());
        else
            acc += term;
    }
    return acc;
}

}  // namespace eqa

#pragma once

#include <Eigen/Core>

#include <cmath>

#include "eqa/dual.hpp"
#include "eqa/jet.hpp"

// Uniform scalar interface for the tensor pipeline: double for plain
// evaluation, Dual for one extra derivative, Jet for composed fields.

namespace eqa {

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }
inline double value_of(const Jet& x) { return x.value(); }

inline double abs_of(double x) { return std::abs(x); }
inline Dual abs_of(const Dual& x) { return abs(x); }
inline Jet abs_of(const Jet& x) { return abs(x); }

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
inline Dual sign_of(const Dual& x) { return sign(x); }
inline Jet sign_of(const Jet& x) { return sign(x); }

inline double pow_of(double x, double a) { return std::pow(x, a); }
inline Dual pow_of(const Dual& x, double a) { return pow(x, a); }
inline Jet pow_of(const Jet& x, double a) { return pow(x, a); }

template <class S>
using SMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using SVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

}  // namespace eqa

namespace Eigen {

template <>
struct NumTraits<eqa::Dual> : GenericNumTraits<eqa::Dual> {
    typedef eqa::Dual Real;
    typedef eqa::Dual NonInteger;
    typedef eqa::Dual Nested;
    typedef double Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 16,
        MulCost = 32
    };
    static inline Real epsilon() { return eqa::Dual(NumTraits<double>::epsilon()); }
    static inline Real dummy_precision() { return eqa::Dual(NumTraits<double>::dummy_precision()); }
    static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <>
struct NumTraits<eqa::Jet> : GenericNumTraits<eqa::Jet> {
    typedef eqa::Jet Real;
    typedef eqa::Jet NonInteger;
    typedef eqa::Jet Nested;
    typedef double Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 16,
        AddCost = 64,
        MulCost = 256
    };
    static inline Real epsilon() { return eqa::Jet(NumTraits<double>::epsilon()); }
    static inline Real dummy_precision() { return eqa::Jet(NumTraits<double>::dummy_precision()); }
    static inline int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen

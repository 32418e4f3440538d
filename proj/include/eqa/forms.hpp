#pragma once

#include <Eigen/Dense>

#include "eqa/errors.hpp"
#include "eqa/linalg.hpp"
#include "eqa/scalar.hpp"

namespace eqa {

using Inertia = InertiaCounts;

namespace detail {
template <class S>
SMat<S> symmetrized(const SMat<S>& a) {
    SMat<S> s = a;
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const S avg = (a(i, j) + a(j, i)) * S(0.5);
            s(i, j) = avg;
            s(j, i) = avg;
        }
    return s;
}
}  // namespace detail

/// Symmetric covariant 2-tensor in the declared equiaffine coordinates.
/// Symmetry is enforced on construction; entries may be any smooth scalar.
template <class S = double>
class SymFormT {
  public:
    SymFormT() = default;
    explicit SymFormT(const SMat<S>& entries) : a_(detail::symmetrized(entries)) {
        if (entries.rows() != entries.cols())
            throw ArgumentError("SymForm: matrix must be square");
    }
    static SymFormT identity(int dim) {
        SMat<S> m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = S(i == j ? 1.0 : 0.0);
        return SymFormT(m);
    }

    int dim() const { return static_cast<int>(a_.rows()); }
    const SMat<S>& mat() const { return a_; }
    const S& operator()(int i, int j) const { return a_(i, j); }

  private:
    SMat<S> a_;
};

/// Symmetric contravariant 2-tensor (adjugates, inverse metrics, ...).
template <class S = double>
class ContraFormT {
  public:
    ContraFormT() = default;
    explicit ContraFormT(const SMat<S>& entries) : a_(detail::symmetrized(entries)) {
        if (entries.rows() != entries.cols())
            throw ArgumentError("ContraForm: matrix must be square");
    }

    int dim() const { return static_cast<int>(a_.rows()); }
    const SMat<S>& mat() const { return a_; }
    const S& operator()(int i, int j) const { return a_(i, j); }

  private:
    SMat<S> a_;
};

using SymForm = SymFormT<double>;
using ContraForm = ContraFormT<double>;

/// Determinant relative to the standard coordinate volume.
template <class S>
S determinant(const SymFormT<S>& a) {
    return det_dense(a.mat());
}

/// Signed-cofactor transpose; adj(a) . a = det(a) . I at every rank.
template <class S>
ContraFormT<S> adjugate(const SymFormT<S>& a) {
    return ContraFormT<S>(eqa::adjugate(a.mat()));
}

/// v . adj(a) . v, evaluated as -det of the bordered (m+1) x (m+1) matrix.
template <class S>
S bordered_determinant(const SymFormT<S>& a, const SVec<S>& v) {
    if (v.size() != a.dim()) throw ArgumentError("bordered_determinant: size mismatch");
    return bordered_determinant(a.mat(), v);
}

/// Inverse; requires |det| > tol * (max|entry|)^m.
template <class S>
ContraFormT<S> inverse(const SymFormT<S>& a, double tol = 1e-10) {
    const int m = a.dim();
    double scale = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(value_of(a(i, j))));
    const S det = det_dense(a.mat());
    if (std::abs(value_of(det)) <= tol * std::pow(std::max(scale, 1e-300), m))
        throw SingularFormError("inverse: form is singular at the given tolerance");
    return ContraFormT<S>(inverse_dense(a.mat()));
}

inline Inertia inertia(const SymForm& a, double tol = 1e-10) {
    return ldl_inertia(a.mat(), tol);
}

}  // namespace eqa

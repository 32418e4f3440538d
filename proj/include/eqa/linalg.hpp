#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "eqa/errors.hpp"
#include "eqa/scalar.hpp"

// Dense kernels written directly over scalar-templated Eigen matrices.
// Everything here must stay correct at exactly the rank-deficient inputs the
// adjugate is used on, so determinants and adjugates never divide by the
// determinant unless a well-conditioned fast path is available.

namespace eqa {

/// Recursive cofactor determinant. Division-free, valid over any scalar ring.
template <class S>
S det_cofactor(const SMat<S>& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return S(1.0);
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (n == 3)
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    SMat<S> minor(n - 1, n - 1);
    S det = S(0.0);
    for (int j = 0; j < n; ++j) {
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = a(r, c);
            }
        }
        const S term = a(0, j) * det_cofactor(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

/// Determinant via in-place LU with partial pivoting on |value|.
template <class S>
S det_lu(SMat<S> a) {
    const int n = static_cast<int>(a.rows());
    S det = S(1.0);
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(value_of(a(k, k)));
        for (int r = k + 1; r < n; ++r) {
            const double w = std::abs(value_of(a(r, k)));
            if (w > best) {
                best = w;
                piv = r;
            }
        }
        if (best == 0.0) return S(0.0);
        if (piv != k) {
            a.row(piv).swap(a.row(k));
            sign = -sign;
        }
        det = det * a(k, k);
        for (int r = k + 1; r < n; ++r) {
            const S f = a(r, k) / a(k, k);
            for (int c = k + 1; c < n; ++c) a(r, c) = a(r, c) - f * a(k, c);
        }
    }
    return sign > 0 ? det : -det;
}

template <class S>
S det_dense(const SMat<S>& a) {
    return a.rows() <= 6 ? det_cofactor(a) : det_lu(a);
}

/// Adjugate by explicit cofactors of minors: adj(a) * a = det(a) * I holds
/// for every rank, including the corank-one Hessians this library lives on.
template <class S>
SMat<S> adjugate_cofactor(const SMat<S>& a) {
    const int n = static_cast<int>(a.rows());
    SMat<S> adj(n, n);
    if (n == 1) {
        adj(0, 0) = S(1.0);
        return adj;
    }
    SMat<S> minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            const S cof = det_dense(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;  // transpose of cofactors
        }
    }
    return adj;
}

/// Adjugate: explicit cofactors for m <= 5; for larger m an inverse-based
/// fast path when the matrix is comfortably nonsingular, cofactors otherwise.
template <class S>
SMat<S> adjugate(const SMat<S>& a) {
    const int n = static_cast<int>(a.rows());
    if (n <= 5) return adjugate_cofactor(a);
    if constexpr (std::is_same_v<S, double>) {
        const double scale = a.cwiseAbs().maxCoeff();
        if (scale > 0.0) {
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
            const double det = lu.determinant();
            if (std::abs(det) > 1e-6 * std::pow(scale, n))
                return det * lu.inverse();
        }
    }
    return adjugate_cofactor(a);
}

/// -det of the bordered matrix [[a, v], [v^T, 0]]; equals v . adj(a) . v.
template <class S>
S bordered_determinant(const SMat<S>& a, const SVec<S>& v) {
    const int n = static_cast<int>(a.rows());
    SMat<S> b(n + 1, n + 1);
    b.topLeftCorner(n, n) = a;
    for (int i = 0; i < n; ++i) {
        b(i, n) = v(i);
        b(n, i) = v(i);
    }
    b(n, n) = S(0.0);
    return -det_dense(b);
}

/// Solve a x = rhs by Gaussian elimination, pivoting on |value|.
template <class S>
SMat<S> lu_solve(SMat<S> a, SMat<S> rhs) {
    const int n = static_cast<int>(a.rows());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(value_of(a(k, k)));
        for (int r = k + 1; r < n; ++r) {
            const double w = std::abs(value_of(a(r, k)));
            if (w > best) {
                best = w;
                piv = r;
            }
        }
        if (best == 0.0) throw SingularFormError("lu_solve: singular matrix");
        if (piv != k) {
            a.row(piv).swap(a.row(k));
            rhs.row(piv).swap(rhs.row(k));
        }
        for (int r = k + 1; r < n; ++r) {
            const S f = a(r, k) / a(k, k);
            for (int c = k + 1; c < n; ++c) a(r, c) = a(r, c) - f * a(k, c);
            for (int c = 0; c < rhs.cols(); ++c) rhs(r, c) = rhs(r, c) - f * rhs(k, c);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int c = 0; c < rhs.cols(); ++c) {
            S acc = rhs(k, c);
            for (int j = k + 1; j < n; ++j) acc = acc - a(k, j) * rhs(j, c);
            rhs(k, c) = acc / a(k, k);
        }
    }
    return rhs;
}

template <class S>
SMat<S> inverse_dense(const SMat<S>& a) {
    const int n = static_cast<int>(a.rows());
    SMat<S> id(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) id(i, j) = S(i == j ? 1.0 : 0.0);
    return lu_solve(a, id);
}

/// Signs of a symmetric matrix: positive / negative / zero pivot counts.
struct InertiaCounts {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    bool operator==(const InertiaCounts&) const = default;
};

/// Inertia by symmetric-pivoted LDL^T with 1x1 and 2x2 pivots
/// (Bunch-Parlett selection). A pivot counts as zero when the whole active
/// block falls below tol * max|entry| of the input.
inline InertiaCounts ldl_inertia(Eigen::MatrixXd a, double tol = 1e-10) {
    const int n = static_cast<int>(a.rows());
    InertiaCounts out;
    if (n == 0) return out;
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    const double cutoff = tol * scale;
    constexpr double alpha = 0.6403882032022076;  // (1 + sqrt(17)) / 8

    std::vector<int> act(n);
    for (int i = 0; i < n; ++i) act[i] = i;

    auto swap_act = [&](int p, int q) {
        if (p == q) return;
        a.row(act[p]).swap(a.row(act[q]));
        a.col(act[p]).swap(a.col(act[q]));
    };

    int k = 0;
    while (k < n) {
        // locate extreme diagonal and off-diagonal entries of the active block
        int rd = k, rp = k, cp = k;
        double maxd = 0.0, maxo = -1.0;
        for (int i = k; i < n; ++i) {
            const double d = std::abs(a(act[i], act[i]));
            if (d > maxd) {
                maxd = d;
                rd = i;
            }
            for (int j = i + 1; j < n; ++j) {
                const double o = std::abs(a(act[i], act[j]));
                if (o > maxo) {
                    maxo = o;
                    rp = i;
                    cp = j;
                }
            }
        }
        if (std::max(maxd, maxo) <= cutoff) {
            out.zero += n - k;
            break;
        }
        if (maxd >= alpha * std::max(maxo, 0.0)) {
            swap_act(k, rd);
            const double p = a(act[k], act[k]);
            (p > 0.0 ? out.positive : out.negative) += 1;
            for (int i = k + 1; i < n; ++i) {
                const double f = a(act[i], act[k]) / p;
                for (int j = i; j < n; ++j) a(act[i], act[j]) -= f * a(act[k], act[j]);
                for (int j = i; j < n; ++j) a(act[j], act[i]) = a(act[i], act[j]);
            }
            k += 1;
        } else {
            swap_act(k, rp);
            swap_act(k + 1, cp);  // cp > rp >= k, so cp lands untouched by the first swap
            const double p11 = a(act[k], act[k]);
            const double p12 = a(act[k], act[k + 1]);
            const double p22 = a(act[k + 1], act[k + 1]);
            const double det = p11 * p22 - p12 * p12;
            if (det < 0.0) {
                out.positive += 1;
                out.negative += 1;
            } else {
                (p11 + p22 > 0.0 ? out.positive : out.negative) += 2;
            }
            const double inv11 = p22 / det, inv22 = p11 / det, inv12 = -p12 / det;
            for (int i = k + 2; i < n; ++i) {
                const double b1 = a(act[i], act[k]);
                const double b2 = a(act[i], act[k + 1]);
                const double f1 = b1 * inv11 + b2 * inv12;
                const double f2 = b1 * inv12 + b2 * inv22;
                for (int j = i; j < n; ++j) {
                    a(act[i], act[j]) -= f1 * a(act[k], act[j]) + f2 * a(act[k + 1], act[j]);
                    a(act[j], act[i]) = a(act[i], act[j]);
                }
            }
            k += 2;
        }
    }
    return out;
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along the
/// first row. Sizes here are at most 2n <= 12.
inline double pfaffian(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    if (n % 2 != 0) return 0.0;
    if (n == 0) return 1.0;
    if (n == 2) return a(0, 1);
    double acc = 0.0;
    for (int j = 1; j < n; ++j) {
        if (a(0, j) == 0.0) continue;
        Eigen::MatrixXd sub(n - 2, n - 2);
        int rr = 0;
        for (int r = 1; r < n; ++r) {
            if (r == j) continue;
            int cc = 0;
            for (int c = 1; c < n; ++c) {
                if (c == j) continue;
                sub(rr, cc++) = a(r, c);
            }
            ++rr;
        }
        const double sgn = (j % 2 == 1) ? 1.0 : -1.0;
        acc += sgn * a(0, j) * pfaffian(sub);
    }
    return acc;
}

/// Orthonormal basis of the kernel of a row covector (the tangent space of
/// a level set), via a full QR of the column vector.
inline Eigen::MatrixXd kernel_basis(const Eigen::VectorXd& covector) {
    const int m = static_cast<int>(covector.size());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(covector);
    Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(m - 1);  // columns orthogonal to covector
}

}  // namespace eqa

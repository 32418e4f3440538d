#pragma once

#include <Eigen/Core>

#include <type_traits>
#include <vector>

#include "eqa/dual.hpp"
#include "eqa/jet.hpp"
#include "eqa/linalg.hpp"
#include "eqa/scalar.hpp"

// The pointwise equiaffine pipeline, generic over a smooth scalar S.
// With S = double it evaluates every level-set invariant at a point; with
// S = Dual (first-order scalars seeded from an order-4 jet) it additionally
// yields the exact coordinate derivative of every derived quantity, which is
// how the shape operator and the divergence term of the mean-curvature
// identity are obtained without finite differencing.

namespace eqa {

struct Tols {
    double regular = 1e-12;        // on |dF|, relative to the coordinate scale
    double nondegenerate = 1e-10;  // on |U(F)|, relative to its natural scale
};

namespace detail {

template <class S>
S read_deriv(const Jet& jet, std::vector<int> e);

template <>
inline double read_deriv<double>(const Jet& jet, std::vector<int> e) {
    return jet.derivative(MultiIndex{std::move(e)});
}

template <>
inline Dual read_deriv<Dual>(const Jet& jet, std::vector<int> e) {
    const int m = jet.dim();
    Dual d(jet.derivative(MultiIndex{e}), Eigen::VectorXd::Zero(m));
    for (int i = 0; i < m; ++i) {
        e[i] += 1;
        d.g[i] = jet.derivative(MultiIndex{e});
        e[i] -= 1;
    }
    return d;
}

}  // namespace detail

template <class S>
struct PipelineData {
    int m = 0;  // ambient dimension
    int n = 0;  // hypersurface dimension, m - 1

    S F{};
    SVec<S> dF;
    SMat<S> hess;

    S H{};        // Hessian determinant
    SMat<S> U;    // adjugate tensor U^{ij}
    SVec<S> N;    // N^i = U^{ip} F_p
    S Ucal{};     // U(F), from the bordered determinant
    double ucal_consistency = 0.0;  // |U(F) - dF(N)|

    bool regular = false;
    bool nondegenerate = false;

    // normal-dependent block, valid when `nondegenerate`
    SMat<S> sff_lo, sff_up;  // second fundamental form rep. and its inverse
    SMat<S> k_lo, k_up;      // equiaffine metric and tangential inverse
    SVec<S> mu;              // (n+2)^{-1} d log U(F)
    SVec<S> rho;             // conormal: -|U|^{-1/(n+2)} dF
    SVec<S> nm;              // equiaffine normal
    SVec<S> Z;               // U(F) sff^{ip} mu_p
    SVec<S> tau_nm;          // connection one-form of nm
    SVec<S> h_flow;          // k^{pq} mu_q, whose divergence enters n*amc
};

/// Run the pipeline on an order-k jet of F (k >= 2 for the algebraic block,
/// k >= 3 for the normal block, k = 4 when S = Dual and the normal block is
/// wanted). `q` is the auxiliary nonvanishing function of the metric-inverse
/// construction; the result is provably independent of it.
template <class S>
PipelineData<S> run_pipeline(const Jet& jet, const Tols& tols = {}, double q = 1.0) {
    static_assert(std::is_same_v<S, double> || std::is_same_v<S, Dual>);
    PipelineData<S> out;
    const int m = jet.dim();
    out.m = m;
    out.n = m - 1;
    const int n = out.n;
    const int avail = jet.order() - (std::is_same_v<S, Dual> ? 1 : 0);

    std::vector<int> e(m, 0);
    auto deriv = [&](std::vector<int> idx) { return detail::read_deriv<S>(jet, std::move(idx)); };

    out.F = deriv(e);
    out.dF.resize(m);
    out.hess.resize(m, m);
    for (int i = 0; i < m; ++i) {
        e[i] = 1;
        out.dF[i] = deriv(e);
        for (int j = i; j < m; ++j) {
            e[j] += 1;
            out.hess(i, j) = deriv(e);
            out.hess(j, i) = out.hess(i, j);
            e[j] -= 1;
        }
        e[i] = 0;
    }

    out.H = det_dense(out.hess);
    out.U = adjugate(out.hess);
    out.N = SVec<S>(m);
    for (int i = 0; i < m; ++i) {
        S acc = S(0.0);
        for (int p = 0; p < m; ++p) acc = acc + out.U(i, p) * out.dF[p];
        out.N[i] = acc;
    }
    out.Ucal = bordered_determinant(out.hess, out.dF);
    S ucal_dot = S(0.0);
    for (int i = 0; i < m; ++i) ucal_dot = ucal_dot + out.dF[i] * out.N[i];
    out.ucal_consistency = std::abs(value_of(out.Ucal) - value_of(ucal_dot));

    double grad_norm = 0.0, hess_norm = 0.0, u_norm = 0.0;
    for (int i = 0; i < m; ++i) {
        grad_norm = std::max(grad_norm, std::abs(value_of(out.dF[i])));
        for (int j = 0; j < m; ++j) {
            hess_norm = std::max(hess_norm, std::abs(value_of(out.hess(i, j))));
            u_norm = std::max(u_norm, std::abs(value_of(out.U(i, j))));
        }
    }
    out.regular = grad_norm > tols.regular * std::max(1.0, std::abs(value_of(out.F)));
    const double u_scale = std::max(1.0, u_norm * grad_norm * grad_norm);
    out.nondegenerate =
        out.regular && std::abs(value_of(out.Ucal)) > tols.nondegenerate * u_scale;

    if (!out.nondegenerate || avail < 3) return out;

    // --- normal-dependent block ---
    const S inv_ucal = S(1.0) / out.Ucal;
    const double expo = 1.0 / (n + 2);
    const S au = abs_of(out.Ucal);
    const S au_pos = pow_of(au, expo);    // |U|^{1/(n+2)}
    const S au_neg = S(1.0) / au_pos;     // |U|^{-1/(n+2)}

    out.sff_lo.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.sff_lo(i, j) = out.hess(i, j) - out.H * inv_ucal * out.dF[i] * out.dF[j];

    SMat<S> m_form = out.sff_lo;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            m_form(i, j) = m_form(i, j) + S(q) * inv_ucal * out.dF[i] * out.dF[j];
    SMat<S> m_inv = inverse_dense(m_form);

    out.sff_up.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.sff_up(i, j) = m_inv(i, j) - S(1.0 / q) * inv_ucal * out.N[i] * out.N[j];

    out.k_lo = out.sff_lo;
    out.k_up = out.sff_up;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            out.k_lo(i, j) = au_neg * out.k_lo(i, j);
            out.k_up(i, j) = au_pos * out.k_up(i, j);
        }

    // mu_i = (n+2)^{-1} d_i U(F) / U(F); d_i U(F) = -tr(adj(B) d_i B) for the
    // bordered matrix B, so third derivatives of F enter here.
    SMat<S> bord(m + 1, m + 1);
    bord.topLeftCorner(m, m) = out.hess;
    for (int i = 0; i < m; ++i) {
        bord(i, m) = out.dF[i];
        bord(m, i) = out.dF[i];
    }
    bord(m, m) = S(0.0);
    SMat<S> adj_bord = adjugate(bord);

    out.mu.resize(m);
    std::fill(e.begin(), e.end(), 0);
    for (int i = 0; i < m; ++i) {
        // d_i B: third derivatives in the core block, Hessian on the border
        SMat<S> dB(m + 1, m + 1);
        for (int p = 0; p < m; ++p) {
            for (int r = p; r < m; ++r) {
                e[i] += 1;
                e[p] += 1;
                e[r] += 1;
                dB(p, r) = deriv(e);
                dB(r, p) = dB(p, r);
                e[i] -= 1;
                e[p] -= 1;
                e[r] -= 1;
            }
            dB(p, m) = out.hess(i, p);
            dB(m, p) = out.hess(i, p);
        }
        dB(m, m) = S(0.0);
        S tr = S(0.0);
        for (int p = 0; p <= m; ++p)
            for (int r = 0; r <= m; ++r) tr = tr + adj_bord(p, r) * dB(r, p);
        const S d_ucal = -tr;  // Jacobi's formula on Ucal = -det B
        out.mu[i] = d_ucal * inv_ucal * S(1.0 / (n + 2));
    }

    out.Z.resize(m);
    out.nm.resize(m);
    out.rho.resize(m);
    out.tau_nm.resize(m);
    out.h_flow.resize(m);
    S n_dot_mu = S(0.0);
    for (int p = 0; p < m; ++p) n_dot_mu = n_dot_mu + out.N[p] * out.mu[p];
    for (int i = 0; i < m; ++i) {
        S sff_mu = S(0.0), k_mu = S(0.0);
        for (int p = 0; p < m; ++p) {
            sff_mu = sff_mu + out.sff_up(i, p) * out.mu[p];
            k_mu = k_mu + out.k_up(i, p) * out.mu[p];
        }
        out.Z[i] = out.Ucal * sff_mu;
        out.h_flow[i] = k_mu;
        out.nm[i] = -au_pos * inv_ucal * out.N[i] - k_mu;
        out.rho[i] = -au_neg * out.dF[i];
        out.tau_nm[i] = inv_ucal * (n_dot_mu - out.H) * out.dF[i];
    }
    return out;
}

}  // namespace eqa

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/operators.hpp"
#include "regraph/spectral.hpp"

namespace regraph {

// Scaled traces y_t(w) = (tr Y^t(w) - (d-w)^t) / (V (w(d-w))^(t/2)) together
// with the raw traces they came from.
struct TraceCoefficients {
    double w = 1.0;
    int t_max = 0;
    bool magnetic = false;
    std::vector<double> y;          // y_0 .. y_tmax
    std::vector<double> raw_trace;  // tr Y^t(w), real part
};

inline void require_tracefriendly(const RegularGraph& g, double w, bool allow_bipartite) {
    if (w <= 0.0 || w >= g.degree())
        throw Error(errc::bad_input, "w must lie in (0, d) for real y_t scaling");
    if (!g.is_connected())
        throw Error(errc::bad_input,
                    "trace formula needs a connected graph (simple trivial eigenvalue)");
    if (!allow_bipartite && g.is_bipartite())
        throw Error(errc::bipartite_input, "bipartite graphs are excluded from the trace formula");
}

// Matrix route: y_t from dense powers of Y(w). The all-ones vector is the
// trivial eigenvector of Y(w) (eigenvalue d-w) on both sides, so powering the
// deflated operator Y - (d-w)/(2E) 11^T yields tr Y^t - (d-w)^t exactly,
// without the catastrophic cancellation of subtracting two ~(d-w)^t numbers.
inline TraceCoefficients compute_y(const RegularGraph& g, double w, int t_max,
                                   bool allow_bipartite = false) {
    require_tracefriendly(g, w, allow_bipartite);
    const int V = g.vertex_count();
    const int n2e = g.directed_edge_count();
    const double d = g.degree();
    const double scale = std::sqrt(w * (d - w));
    TraceCoefficients tc;
    tc.w = w;
    tc.t_max = t_max;
    tc.y.resize(t_max + 1);
    tc.raw_trace.resize(t_max + 1);

    Matrix y = edge_Y(g, w) - Matrix::Constant(n2e, n2e, (d - w) / n2e);
    Matrix p = y;
    double dw_pow = d - w, scale_pow = scale;
    tc.raw_trace[0] = n2e;
    tc.y[0] = (n2e - 1.0) / V;
    for (int t = 1; t <= t_max; ++t) {
        const double deflated = p.trace();  // tr Y^t - (d-w)^t
        tc.raw_trace[t] = deflated + dw_pow;
        tc.y[t] = deflated / (V * scale_pow);
        if (t < t_max) {
            p = p * y;
            dw_pow *= (d - w);
            scale_pow *= scale;
        }
    }
    return tc;
}

// Eigenvalue route, the right-hand side of the trace identity:
//   y_t = (1/V) r^t + (d-2)/2 r^t (1 + (-1)^t) + (2/V) sum_k T_t(x_k),
// with r = sqrt(w/(d-w)) and x_k = mu_k / (2 sqrt(w(d-w))); T_t is continued
// hyperbolically when |x_k| > 1, which keeps the identity exact for
// non-Ramanujan spectra.
inline std::vector<double> y_eigenvalue_side(const SpectralData& spec, int V, double w,
                                             int t_max) {
    const double d = spec.degree;
    const double r = std::sqrt(w / (d - w));
    const double half_band = 2.0 * std::sqrt(w * (d - w));
    std::vector<double> y(t_max + 1);
    std::vector<double> x;
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k)
        x.push_back(spec.eigenvalues[k] / half_band);
    double r_pow = 1.0;
    for (int t = 0; t <= t_max; ++t) {
        double cheb = 0.0;
        for (double xk : x) cheb += chebyshev_T(t, xk);
        const double parity = (t % 2 == 0) ? 2.0 : 0.0;
        y[t] = r_pow / V + 0.5 * (d - 2.0) * r_pow * parity + 2.0 * cheb / V;
        r_pow *= r;
    }
    return y;
}

// tr Y(1)^t recovered from the adjacency spectrum through the edge-spectrum
// mapping; the fast route for ensemble observables at V in the hundreds.
inline double trY_from_spectrum(const SpectralData& spec, int V, int t) {
    const double d = spec.degree;
    const double scale_pow = std::pow(std::sqrt(d - 1.0), t);
    const double y = y_eigenvalue_side(spec, V, 1.0, t)[t];
    return V * y * scale_pow + std::pow(d - 1.0, t);
}

// Magnetic scaled traces y_t = tr (Y^(M))^t / (V (d-1)^(t/2)); no trivial
// eigenvalue to subtract.
inline TraceCoefficients compute_y_magnetic(const RegularGraph& g, const MagneticDecoration& m,
                                            int t_max) {
    m.check(g);
    const int V = g.vertex_count();
    const double d = g.degree();
    const double scale = std::sqrt(d - 1.0);
    TraceCoefficients tc;
    tc.w = 1.0;
    tc.t_max = t_max;
    tc.magnetic = true;
    tc.y.resize(t_max + 1);
    tc.raw_trace.resize(t_max + 1);
    CMatrix y = edge_B_magnetic(g, m) - edge_J(g).cast<Complex>();
    CMatrix p = CMatrix::Identity(y.rows(), y.cols());
    double scale_pow = 1.0;
    for (int t = 0; t <= t_max; ++t) {
        Complex tr = p.trace();
        tc.raw_trace[t] = tr.real();
        tc.y[t] = tr.real() / (V * scale_pow);
        if (t < t_max) {
            p = p * y;
            scale_pow *= scale;
        }
    }
    return tc;
}

// Magnetic eigenvalue route via the decorated mapping: all V eigenvalues of
// A^(M) enter, the +-1 multiplicities contribute (E-V)(1+(-1)^t).
inline std::vector<double> y_magnetic_eigenvalue_side(const SpectralData& magnetic_spec, int V,
                                                      int d, int t_max) {
    const double half_band = 2.0 * std::sqrt(d - 1.0);
    const int EmV = V * (d - 2) / 2;
    std::vector<double> y(t_max + 1);
    for (int t = 0; t <= t_max; ++t) {
        double cheb = 0.0;
        for (double mu : magnetic_spec.eigenvalues) cheb += chebyshev_T(t, mu / half_band);
        const double parity = (t % 2 == 0) ? 2.0 : 0.0;
        const double scale_pow = std::pow(std::sqrt(d - 1.0), t);
        y[t] = (EmV * parity / scale_pow + 2.0 * cheb) / V;
    }
    return y;
}

// Max over t <= t_max of |matrix-side y_t - eigenvalue-side y_t|, scaled by
// max(1, |y_t|): for w inside [1, (d-1)/2] the y_t are O(1) and this is the
// plain absolute gap, while for small w the y_t grow exponentially in t and
// only the relative gap is meaningful in doubles.
inline double verify_ywt_identity(const RegularGraph& g, double w, int t_max,
                                  bool allow_bipartite = false) {
    TraceCoefficients tc = compute_y(g, w, t_max, allow_bipartite);
    SpectralData spec = adjacency_spectrum(g);
    std::vector<double> rhs = y_eigenvalue_side(spec, g.vertex_count(), w, t_max);
    double worst = 0.0;
    for (int t = 0; t <= t_max; ++t)
        worst = std::max(worst, std::abs(tc.y[t] - rhs[t]) / std::max(1.0, std::abs(rhs[t])));
    return worst;
}

// -- closed-form density pieces -------------------------------------------------

inline void check_support(double mu, double d, double w) {
    if (mu * mu >= 4.0 * w * (d - w))
        throw Error(errc::out_of_support, "mu outside the band |mu| < 2 sqrt(w(d-w))");
    if (std::abs(d - mu) < 1e-12 || std::abs(d + mu) < 1e-12)
        throw Error(errc::pole_at_d, "mu = +-d is a pole");
}

// Smooth part of the w-family density; reduces to Kesten-McKay at w = 1 and
// integrates to 1 over its band for every valid w.
inline double rho_smooth(double mu, int d, double w) {
    check_support(mu, d, w);
    const double band2 = 4.0 * w * (d - w);
    const double base = (d / (2.0 * M_PI)) / std::sqrt(band2 - mu * mu);
    const double term2 = (d - 2.0 * w) * (d - 2.0) / (d * d - mu * mu);
    const double term3 =
        (w - 1.0) * (w - 1.0) * (mu * mu - 2.0 * w * (d - w)) / (w * w * (d - w) * (d - w));
    return base * (1.0 - term2 + term3);
}

// The 1/V correction; reduces at w = 1 to
//   -(1 + mu + mu^2 - 2(d-1) + (d-2)/(d-mu)) / (2 pi sqrt(4(d-1)-mu^2)).
inline double rho_corr(double mu, int d, double w, int /*V*/ = 0) {
    check_support(mu, d, w);
    const double band2 = 4.0 * w * (d - w);
    const double pre = -1.0 / (2.0 * M_PI * std::sqrt(band2 - mu * mu));
    return pre * (1.0 + mu / w + (mu * mu - 2.0 * w * (d - w)) / (w * w) +
                  (d - 2.0 * w) / (d - mu));
}

// -- reconstruction ---------------------------------------------------------------

struct TraceFormulaDecomposition {
    double w = 1.0;
    int t_max = 0;
    DensityCurve smooth;
    DensityCurve oscillatory;
    DensityCurve correction;       // already divided by V
    DensityCurve empirical_coarse; // kernel-smoothed spectrum at matched resolution
};

// Kernel-smoothed comb over the nontrivial in-band eigenvalues with an
// explicit normalization constant (1/norm per eigenvalue).
inline DensityCurve coarse_comb(const SpectralData& spec, double half_band, int t_max,
                                const std::vector<double>& grid, double norm) {
    DensityCurve c;
    c.mu = grid;
    c.rho.assign(grid.size(), 0.0);
    std::vector<double> kept;
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k)
        if (std::abs(spec.eigenvalues[k]) <= half_band) kept.push_back(spec.eigenvalues[k]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i] / half_band;
        if (std::abs(x) >= 1.0) continue;
        double acc = 0.0;
        for (double mk : kept) acc += coarse_delta(x, mk / half_band, t_max);
        c.rho[i] = acc / (half_band * norm);
    }
    c.provenance = "empirical-coarse(tmax=" + std::to_string(t_max) + ")";
    return c;
}

// Smooth + truncated oscillatory + correction/V on a grid inside the band,
// plus the coarse-grained empirical comparison target at the same resolution.
// The oscillatory sum starts at t = 3 (t = 1 for multigraphs, where loops
// contribute short walks); y_0..y_2 are folded into the correction term.
inline TraceFormulaDecomposition reconstruct_density(const RegularGraph& g, double w, int t_max,
                                                     int grid_points,
                                                     bool allow_bipartite = false) {
    require_tracefriendly(g, w, allow_bipartite);
    const int V = g.vertex_count();
    const int d = g.degree();
    const double half_band = 2.0 * std::sqrt(w * (d - w));
    const int t_start = g.is_multigraph_mode() ? 1 : 3;

    SpectralData spec = adjacency_spectrum(g);
    std::vector<double> y;
    if (g.directed_edge_count() <= 300)
        y = compute_y(g, w, t_max, allow_bipartite).y;
    else
        y = y_eigenvalue_side(spec, V, w, t_max);

    TraceFormulaDecomposition out;
    out.w = w;
    out.t_max = t_max;
    const double margin = 1e-4;
    std::vector<double> grid =
        linspace(-half_band * (1.0 - margin), half_band * (1.0 - margin), grid_points);

    out.smooth.mu = out.oscillatory.mu = out.correction.mu = grid;
    out.smooth.provenance = "trace-formula-smooth(w=" + std::to_string(w) + ")";
    out.oscillatory.provenance = "trace-formula-osc";
    out.correction.provenance = "trace-formula-corr/V";
    out.smooth.rho.resize(grid.size());
    out.oscillatory.rho.resize(grid.size());
    out.correction.rho.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mu = grid[i];
        out.smooth.rho[i] = rho_smooth(mu, d, w);
        out.correction.rho[i] = rho_corr(mu, d, w) / V;
        const double root = std::sqrt(half_band * half_band - mu * mu);
        const double x = mu / half_band;
        double acc = 0.0;
        for (int t = t_start; t <= t_max; ++t) acc += y[t] * chebyshev_T(t, x);
        out.oscillatory.rho[i] = acc / (M_PI * root);
    }
    out.empirical_coarse = coarse_comb(spec, half_band, t_max, grid, static_cast<double>(V));
    return out;
}

}  // namespace regraph

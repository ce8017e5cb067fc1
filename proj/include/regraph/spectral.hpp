#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/operators.hpp"

namespace regraph {

// -- Chebyshev polynomials of the first kind ----------------------------------

// T_t(x) by the three-term recurrence on [-1,1]; hyperbolic continuation
// T_t(x) = sign(x)^t cosh(t acosh|x|) outside, so the map stays total.
inline double chebyshev_T(int t, double x) {
    if (t < 0) throw Error(errc::bad_input, "chebyshev_T needs t >= 0");
    if (t == 0) return 1.0;
    if (t == 1) return x;
    if (std::abs(x) <= 1.0) {
        double tkm1 = 1.0, tk = x;
        for (int k = 1; k < t; ++k) {
            double tkp1 = 2.0 * x * tk - tkm1;
            tkm1 = tk;
            tk = tkp1;
        }
        return tk;
    }
    double sign = (x < 0.0 && (t & 1)) ? -1.0 : 1.0;
    return sign * std::cosh(static_cast<double>(t) * std::acosh(std::abs(x)));
}

// arccos continued off [-1,1] as -i log(x + sqrt(x^2 - 1)).
inline Complex arccos_continued(double x) {
    if (std::abs(x) <= 1.0) return Complex(std::acos(x), 0.0);
    Complex z(x, 0.0);
    Complex root = std::sqrt(z * z - 1.0);
    Complex w = std::log(z + root);
    return Complex(0.0, -1.0) * w;
}

// -- spectra -------------------------------------------------------------------

// Full spectrum of an adjacency-type matrix, sorted non-increasing, plus the
// phases phi_k = arccos(mu_k / 2 sqrt(w(d-w))) used by the Y(w) mapping.
struct SpectralData {
    std::vector<double> eigenvalues;    // non-increasing
    bool trivial_leading = false;       // mu_0 == d (connected regular graph)
    double degree = 0.0;
    std::vector<Complex> phases;        // per eigenvalue, for the last w used

    void compute_phases(double w) {
        const double d = degree;
        const double half_band = 2.0 * std::sqrt(w * (d - w));
        phases.clear();
        phases.reserve(eigenvalues.size());
        for (double mu : eigenvalues) phases.push_back(arccos_continued(mu / half_band));
    }
};

inline SpectralData adjacency_spectrum(const Matrix& m, double degree_hint = 0.0) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw Error(errc::not_hermitian, "adjacency_spectrum needs a symmetric matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    SpectralData s;
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<double>());
    s.degree = degree_hint > 0.0 ? degree_hint : (s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0]);
    s.trivial_leading =
        !s.eigenvalues.empty() && std::abs(s.eigenvalues[0] - s.degree) < 1e-8;
    return s;
}

inline SpectralData adjacency_spectrum(const CMatrix& m, double degree_hint = 0.0) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        throw Error(errc::not_hermitian, "adjacency_spectrum needs a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    SpectralData s;
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<double>());
    s.degree = degree_hint;
    s.trivial_leading = false;
    return s;
}

inline SpectralData adjacency_spectrum(const RegularGraph& g) {
    return adjacency_spectrum(adjacency(g), static_cast<double>(g.degree()));
}

// Predicted sigma(Y(w)) from the adjacency spectrum of a connected regular
// graph: {d-w, w, +-w with multiplicity E-V each} plus, per nontrivial mu_k,
// the two roots of lambda^2 - mu_k lambda + w(d-w) = 0, which are
// sqrt(w(d-w)) e^{+-i phi_k} with phi_k = arccos(mu_k / 2 sqrt(w(d-w))).
inline std::vector<Complex> edge_spectrum_from_vertex(const SpectralData& spec, double w, int E,
                                                      int V) {
    const double d = spec.degree;
    std::vector<Complex> out;
    out.reserve(2 * E);
    out.emplace_back(d - w, 0.0);
    out.emplace_back(w, 0.0);
    for (int i = 0; i < E - V; ++i) {
        out.emplace_back(w, 0.0);
        out.emplace_back(-w, 0.0);
    }
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k) {
        const double mu = spec.eigenvalues[k];
        Complex disc = std::sqrt(Complex(mu * mu - 4.0 * w * (d - w), 0.0));
        out.push_back((Complex(mu, 0.0) + disc) / 2.0);
        out.push_back((Complex(mu, 0.0) - disc) / 2.0);
    }
    return out;
}

// Direct eigenvalues of an arbitrary (real or complex) edge operator.
inline std::vector<Complex> direct_spectrum(const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    return v;
}

inline std::vector<Complex> direct_spectrum(const Matrix& m) {
    return direct_spectrum(CMatrix(m.cast<Complex>()));
}

// Greedy multiset match: max over one list of the distance to its closest
// unmatched partner in the other. Quadratic, fine at test sizes.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<char> used(b.size(), 0);
    for (const Complex& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double dist = std::abs(x - b[j]);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        used[best_j] = 1;
        worst = std::max(worst, best);
    }
    return worst;
}

// -- Kesten-McKay density -------------------------------------------------------

inline double km_half_band(int d) { return 2.0 * std::sqrt(static_cast<double>(d - 1)); }

inline double kesten_mckay(double mu, int d) {
    if (d < 3) throw Error(errc::bad_input, "kesten_mckay needs d >= 3");
    const double band = km_half_band(d);
    if (std::abs(mu) >= band) return 0.0;
    const double inside = std::max(0.0, (band - mu) * (band + mu));
    return (d / (2.0 * M_PI)) * std::sqrt(inside) / (d * d - mu * mu);
}

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

template <typename F>
double integrate_gl(F&& f, double a, double b, int n = 96) {
    const auto& [x, w] = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * f(mid + half * x[i]);
    return acc * half;
}

// Kesten-McKay counting function N_KM(mu) = integral of rho_KM from the lower
// band edge. The substitution mu = band sin(theta) removes the sqrt endpoint
// singularity, so fixed-order Gauss-Legendre converges to machine precision.
inline double km_counting(double mu, int d) {
    const double band = km_half_band(d);
    if (mu <= -band) return 0.0;
    if (mu >= band) return 1.0;
    const double t0 = -M_PI / 2.0;
    const double t1 = std::asin(mu / band);
    auto f = [&](double th) {
        double s = band * std::sin(th);
        double c = band * std::cos(th);
        return (d / (2.0 * M_PI)) * c * c / (d * d - s * s);
    };
    return integrate_gl(f, t0, t1, 128);
}

// -- coarse-grained delta kernel -------------------------------------------------

// Truncated Chebyshev reproducing kernel
//   delta~(x,x') = 2/(pi sqrt(1-x^2)) sum_{t<=tmax} T_t(x) T_t(x')/(1+delta_t0),
// peaked at x = x' with width ~ 1/tmax; integrates to 1 in x for any tmax.
inline double coarse_delta(double x, double xp, int t_max) {
    if (std::abs(x) >= 1.0)
        throw Error(errc::endpoint_singular, "coarse_delta undefined at |x| = 1");
    if (std::abs(xp) > 1.0) throw Error(errc::bad_input, "coarse_delta needs |x'| <= 1");
    double sum = 0.5;  // t = 0 term
    double txm1 = 1.0, tx = x, tym1 = 1.0, ty = xp;
    for (int t = 1; t <= t_max; ++t) {
        sum += tx * ty;
        double tx2 = 2.0 * x * tx - txm1;
        txm1 = tx;
        tx = tx2;
        double ty2 = 2.0 * xp * ty - tym1;
        tym1 = ty;
        ty = ty2;
    }
    return 2.0 / (M_PI * std::sqrt(1.0 - x * x)) * sum;
}

// Upper bound on tmax from the non-Ramanujan distance estimate: exceeding it
// lets eigenvalues just outside the band dominate the truncated sum.
inline double coarse_tmax_bound(int V, double a = 1.0, double alpha = 2.0 / 3.0) {
    return std::pow(V, alpha / 2.0) / a * std::log(std::pow(V, 1.0 - alpha / 2.0));
}

// -- density curves ---------------------------------------------------------------

struct DensityCurve {
    std::vector<double> mu;
    std::vector<double> rho;
    std::string provenance;

    double integral() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < mu.size(); ++i)
            acc += 0.5 * (rho[i] + rho[i + 1]) * (mu[i + 1] - mu[i]);
        return acc;
    }
};

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
    return v;
}

inline DensityCurve kesten_mckay_curve(int d, int grid_points) {
    const double band = km_half_band(d);
    DensityCurve c;
    c.mu = linspace(-band, band, grid_points);
    c.rho.reserve(c.mu.size());
    for (double m : c.mu) c.rho.push_back(kesten_mckay(m, d));
    c.provenance = "kesten-mckay";
    return c;
}

// Eigenvalues strictly outside the Kesten-McKay band, trivial one excluded;
// the classification tolerance absorbs eigensolver noise at the band edge.
inline std::vector<double> non_ramanujan_set(const SpectralData& spec, int d,
                                             double tol = 1e-12) {
    const double band = km_half_band(d);
    std::vector<double> gamma;
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k)
        if (std::abs(spec.eigenvalues[k]) > band * (1.0 + tol)) gamma.push_back(spec.eigenvalues[k]);
    return gamma;
}

// In-band nontrivial eigenvalues, scaled to [-1, 1]; the complement of the
// non-Ramanujan set plus the trivial eigenvalue.
inline std::vector<double> km_band_positions(const SpectralData& spec, int d,
                                             double tol = 1e-12) {
    const double band = km_half_band(d);
    std::vector<double> kept;
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k)
        if (std::abs(spec.eigenvalues[k]) <= band * (1.0 + tol))
            kept.push_back(std::clamp(spec.eigenvalues[k] / band, -1.0, 1.0));
    if (kept.empty()) throw Error(errc::all_eigenvalues_excluded, "no in-band eigenvalues left");
    return kept;
}

// Coarse-grained spectral density at one point of the KM interval:
// kernel-smoothed comb over the nontrivial in-band eigenvalues, normalized by
// their count so the full curve integrates to one.
inline double coarse_density_value(const SpectralData& spec, int d, int t_max, double mu) {
    const double band = km_half_band(d);
    if (std::abs(mu) >= band) throw Error(errc::out_of_support, "mu outside the KM band");
    auto kept = km_band_positions(spec, d);
    double acc = 0.0;
    for (double xk : kept) acc += coarse_delta(mu / band, xk, t_max);
    return acc / (band * static_cast<double>(kept.size()));
}

inline DensityCurve coarse_density(const SpectralData& spec, int d, int t_max, int grid_points,
                                   double band_margin = 1e-6) {
    const double band = km_half_band(d);
    auto kept = km_band_positions(spec, d);
    DensityCurve c;
    c.mu = linspace(-band * (1.0 - band_margin), band * (1.0 - band_margin), grid_points);
    c.rho.assign(c.mu.size(), 0.0);
    for (std::size_t i = 0; i < c.mu.size(); ++i) {
        const double x = c.mu[i] / band;
        double acc = 0.0;
        for (double xk : kept) acc += coarse_delta(x, xk, t_max);
        c.rho[i] = acc / (band * static_cast<double>(kept.size()));
    }
    c.provenance = "coarse(tmax=" + std::to_string(t_max) + ")";
    return c;
}

inline DensityCurve coarse_density(const RegularGraph& g, int t_max, int grid_points = 400) {
    return coarse_density(adjacency_spectrum(g), g.degree(), t_max, grid_points);
}

// Empirical eigenvalue histogram as a density (bin mass / bin width).
struct Histogram {
    double lo = 0.0, hi = 0.0, bin_width = 0.0;
    std::vector<double> count;
    double total = 0.0;

    Histogram(double lo_, double hi_, double width) : lo(lo_), hi(hi_), bin_width(width) {
        count.assign(static_cast<std::size_t>(std::ceil((hi - lo) / width)) + 1, 0.0);
    }
    void add(double x) {
        if (x < lo || x >= hi) return;
        count[static_cast<std::size_t>((x - lo) / bin_width)] += 1.0;
        total += 1.0;
    }
    double density(std::size_t b) const {
        return total > 0.0 ? count[b] / (total * bin_width) : 0.0;
    }
    double center(std::size_t b) const { return lo + (b + 0.5) * bin_width; }
    std::size_t bins() const { return count.size(); }
};

}  // namespace regraph

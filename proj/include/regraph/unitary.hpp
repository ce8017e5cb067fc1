#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"
#include "regraph/operators.hpp"
#include "regraph/spectral.hpp"
#include "regraph/walks.hpp"

namespace regraph {

// Parameters of U(mu, phi) = alpha B - beta J with
//   alpha = (1 - e^{2 i phi}) / (mu - d e^{i phi}),  beta = e^{i phi},
// valid on mu in (-d, d), phi not a multiple of pi.
struct UnitaryParams {
    double mu = 0.0;
    double phi = 0.0;
    int d = 0;
    Complex alpha;
    Complex beta;

    static UnitaryParams make(int d, double mu, double phi) {
        if (std::abs(std::remainder(phi, M_PI)) < 1e-12)
            throw Error(errc::degenerate_phase, "phi must avoid multiples of pi");
        if (std::abs(mu) >= d) throw Error(errc::bad_input, "mu must lie in (-d, d)");
        UnitaryParams p;
        p.mu = mu;
        p.phi = phi;
        p.d = d;
        p.beta = std::polar(1.0, phi);
        Complex denom = Complex(mu, 0.0) - static_cast<double>(d) * p.beta;
        if (std::abs(denom) < 1e-12)
            throw Error(errc::pole, "mu = d e^{i phi} pole");
        p.alpha = (1.0 - p.beta * p.beta) / denom;
        return p;
    }

    double unitarity_defect() const {
        // |beta|^2 = 1 and |alpha|^2 d = alpha beta* + alpha* beta
        double c1 = std::abs(std::norm(beta) - 1.0);
        double c2 = std::abs(std::norm(alpha) * d - 2.0 * std::real(alpha * std::conj(beta)));
        return std::max(c1, c2);
    }
    double spectral_relation_defect() const {
        // alpha mu = 1 + d alpha beta - beta^2
        return std::abs(alpha * mu - (1.0 + static_cast<double>(d) * alpha * beta - beta * beta));
    }
};

inline CMatrix build_U(const RegularGraph& g, double mu, double phi) {
    UnitaryParams p = UnitaryParams::make(g.degree(), mu, phi);
    return p.alpha * edge_B(g).cast<Complex>() - p.beta * edge_J(g).cast<Complex>();
}

// Continuous-family patch: at a parameter point where phi hits pi*k the
// operator degenerates to (-1)^k J, which is still unitary.
inline CMatrix build_U_patched(const RegularGraph& g, double mu, double phi) {
    double r = std::remainder(phi, M_PI);
    if (std::abs(r) < 1e-12) {
        long k = std::lround((phi - r) / M_PI);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        return sign * edge_J(g).cast<Complex>();
    }
    return build_U(g, mu, phi);
}

// The fixed-phase evolution operator of the earlier trace formula,
// U(mu) = i [ -2/(d - i mu) B + J ]; equals U(mu, -pi/2).
inline CMatrix legacy_U(const RegularGraph& g, double mu) {
    const double d = g.degree();
    Complex pre = Complex(0.0, 1.0);
    Complex coef = -2.0 / Complex(d, -mu);
    return pre * (coef * edge_B(g).cast<Complex>() + edge_J(g).cast<Complex>());
}

// Secular identity residual:
// det(I - U(mu,phi)) = (1 - e^{2 i phi})^E (mu - d e^{i phi})^{-V} det(mu I - A).
inline double secular_identity_residual(const RegularGraph& g, double mu, double phi) {
    UnitaryParams p = UnitaryParams::make(g.degree(), mu, phi);
    const int E = g.edge_count(), V = g.vertex_count();
    CMatrix U = p.alpha * edge_B(g).cast<Complex>() - p.beta * edge_J(g).cast<Complex>();
    Complex lhs = (CMatrix::Identity(U.rows(), U.cols()) - U).determinant();
    CMatrix zm = Complex(mu, 0.0) * CMatrix::Identity(V, V) - adjacency(g).cast<Complex>();
    Complex beta2 = 1.0 - p.beta * p.beta;
    Complex denom = Complex(mu, 0.0) - static_cast<double>(g.degree()) * p.beta;
    Complex rhs = std::pow(beta2, E) * std::pow(denom, -V) * zm.determinant();
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

// -- closed-form traces ------------------------------------------------------------

// tr U^t = alpha^t sum_g N(t;g) z^g with z = (alpha - beta)/alpha: each
// transmission step contributes alpha, each back-scatter alpha - beta.
// Written in amplitude-phase form,
//   alpha = (2 sin phi / rho) e^{i (phi - pi/2 - psi)},  psi = arg(mu - d e^{i phi}),
//   z     = a~ e^{i chi},  a~ = sqrt(2 + d(d-2) + mu^2 - 2 mu d cos phi
//                                     + 2(d-1) cos 2 phi) / (2 sin phi),
//   chi   = arg((2-d) sin phi + i (d cos phi - mu)),
// with the arg branches fixed so the expression reproduces the direct trace.
inline Complex trU_closed_form(int d, double mu, double phi, int t,
                               const WalkCountTable& walks) {
    const double rho2 = mu * mu + d * d - 2.0 * mu * d * std::cos(phi);
    const double sinphi = std::sin(phi);
    const double psi = std::atan2(-d * sinphi, mu - d * std::cos(phi));
    const double theta = phi - M_PI / 2.0 - psi;  // per-step transmission phase
    const double atilde_sq =
        2.0 + d * (d - 2.0) + mu * mu - 2.0 * mu * d * std::cos(phi) +
        2.0 * (d - 1.0) * std::cos(2.0 * phi);
    const double atilde = std::sqrt(std::max(0.0, atilde_sq)) / (2.0 * sinphi);
    const double chi = std::atan2(d * std::cos(phi) - mu, (2.0 - d) * sinphi);

    Complex sum(0.0, 0.0);
    for (int gbs = 0; gbs <= t; ++gbs) {
        BigInt n = walks.at(t, gbs);
        if (n == 0) continue;
        double count = n.convert_to<double>();
        sum += count * std::pow(atilde, gbs) * std::polar(1.0, gbs * chi);
    }
    const double amp = std::pow(2.0 * sinphi, t) / std::pow(rho2, 0.5 * t);
    return amp * std::polar(1.0, t * theta) * sum;
}

// The phi = -pi/2 specialization:
//   tr U^t = 2^t / (d^2+mu^2)^{t/2} e^{i t (arctan(mu/d) - pi/2)}
//            sum_g N(t;g) ((d-2)^2 + mu^2)^{g/2} / 2^g e^{-i g arctan(mu/(d-2))}
// with the g-phase arctan taken on the branch through pi (the back-scatter
// amplitude (alpha - beta)/alpha = -((d-2) - i mu)/2 has negative real part).
inline Complex trU_neg_half_pi(int d, double mu, int t, const WalkCountTable& walks) {
    const double amp_t = std::pow(2.0, t) / std::pow(d * d + mu * mu, 0.5 * t);
    const double phase_t = t * (std::atan(mu / d) - M_PI / 2.0);
    Complex sum(0.0, 0.0);
    for (int gbs = 0; gbs <= t; ++gbs) {
        BigInt n = walks.at(t, gbs);
        if (n == 0) continue;
        double count = n.convert_to<double>();
        double amp_g = std::pow((d - 2.0) * (d - 2.0) + mu * mu, 0.5 * gbs) / std::pow(2.0, gbs);
        double phase_g = gbs * (M_PI - std::atan(mu / (d - 2.0)));
        sum += count * amp_g * std::polar(1.0, phase_g);
    }
    return amp_t * sum * std::polar(1.0, phase_t);
}

// Smooth (first) term of the constant-phi density:
//   -(1/(pi d)) sin phi / ((mu/d)^2 + 1 - 2 (mu/d) cos phi).
// At phi = -pi/2 this is the Lorentzian d / (pi (mu^2 + d^2)).
inline double smooth_density_const_phi(double mu, int d, double phi) {
    const double u = mu / d;
    return -(1.0 / (M_PI * d)) * std::sin(phi) / (u * u + 1.0 - 2.0 * u * std::cos(phi));
}

// -- Kesten-McKay phase function -----------------------------------------------------

// Scaled phase of (1 - e^{2 i phi})^{-E} (mu - d e^{i phi})^{V}, continuous in
// phi, normalized so that along a solution branch F(mu, phi(mu)) equals the
// Kesten-McKay counting function plus the branch constant:
//   F(mu, phi) = (d / 2 pi) arg(1 - e^{2 i phi}) - arg(mu - d e^{i phi}) / pi,
// with arg(1 - e^{2 i phi}) continued as phi - pi/2 and the second arg lifted
// across periods (it gains 2 pi per phi-period). F(mu, phi + 2 pi) = F + (d-2).
inline double phase_function(int d, double mu, double phi) {
    const double two_pi = 2.0 * M_PI;
    double n = std::floor(phi / two_pi);
    double phi0 = phi - n * two_pi;  // in [0, 2 pi)
    double psi = std::atan2(-d * std::sin(phi0), mu - d * std::cos(phi0)) + n * two_pi;
    double arg_b = phi - M_PI / 2.0;
    return (d / two_pi) * arg_b - psi / M_PI;
}

// Smooth spectral density along a mu-dependent phase path:
//   rho = (d / 2 pi) [ -2 sin phi + phi'(mu) (mu^2 + d(d-2) - 2(d-1) mu cos phi) ]
//         / (mu^2 + d^2 - 2 mu d cos phi).
// With phi' = 0 this is the constant-phi smooth term above; along a solved
// Kesten-McKay branch it equals rho_KM.
inline double smooth_density_phase_path(int d, double mu, double phi, double dphi_dmu) {
    const double rho2 = mu * mu + d * d - 2.0 * mu * d * std::cos(phi);
    const double q = mu * mu + d * (d - 2.0) - 2.0 * (d - 1.0) * mu * std::cos(phi);
    return (d / (2.0 * M_PI)) * (-2.0 * std::sin(phi) + dphi_dmu * q) / rho2;
}

struct PhaseFunction {
    int d = 0;
    int V = 0;
    long branch = 0;  // k in the 2k/V branch constant
    std::vector<double> mu;
    std::vector<double> phi;
    std::vector<double> residual;   // counting-equation residual per point
    std::vector<double> crossings;  // mu positions where phi crossed a multiple of pi
    double max_residual = 0.0;
};

namespace detail {

// Bisection for F(mu, phi) = target on [lo, hi] (the bracket must straddle).
inline double bisect_phase(int d, double mu, double target, double lo, double hi) {
    auto g = [&](double p) { return phase_function(d, mu, p) - target; };
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

// Nearest root of F = target to `seed` inside [seed - span, seed + span].
inline bool find_root_near(int d, double mu, double target, double seed, double span,
                           double& root) {
    const int steps = 4096;
    auto g = [&](double p) { return phase_function(d, mu, p) - target; };
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    double prev_p = seed - span, prev_g = g(prev_p);
    for (int i = 1; i <= steps; ++i) {
        double p = seed - span + 2.0 * span * i / steps;
        double gp = g(p);
        if ((gp > 0) != (prev_g > 0)) {
            double r = bisect_phase(d, mu, target, prev_p, p);
            if (std::abs(r - seed) < best) {
                best = std::abs(r - seed);
                root = r;
                found = true;
            }
        }
        prev_p = p;
        prev_g = gp;
    }
    return found;
}

}  // namespace detail

// Large-d first-order branch curve, used to seed the solver:
//   phi = C_k - mu sqrt(4(d-1) - mu^2) / (2 (d-1)^2) - (2/(d-1)) asin(mu / 2 sqrt(d-1)),
//   C_k = pi/2 + (2 pi / (d-2)) (1 + 2k/V).
inline double phi_km_large_d_guess(int d, double mu, long k, int V) {
    const double ck = M_PI / 2.0 + (2.0 * M_PI / (d - 2.0)) * (1.0 + 2.0 * static_cast<double>(k) / V);
    const double band2 = 4.0 * (d - 1.0);
    double inside = std::max(0.0, band2 - mu * mu);
    return ck - mu * std::sqrt(inside) / (2.0 * (d - 1.0) * (d - 1.0)) -
           (2.0 / (d - 1.0)) * std::asin(std::clamp(mu / std::sqrt(band2), -1.0, 1.0));
}

// Solve the counting-function equation F(mu, phi) = N_KM(mu) + 2k/V per grid
// point by bisection, with branch continuation from the middle of the grid
// outward. The branch constant is additive, so branch k + (d-2)V/2 solves to
// the branch-k curve shifted by 2 pi.
inline PhaseFunction solve_phi_KM(int d, long k, int V, const std::vector<double>& mu_grid) {
    if (d < 3) throw Error(errc::bad_input, "solve_phi_KM needs d >= 3");
    PhaseFunction out;
    out.d = d;
    out.V = V;
    out.branch = k;
    out.mu = mu_grid;
    out.phi.assign(mu_grid.size(), 0.0);
    out.residual.assign(mu_grid.size(), 0.0);
    const double band = km_half_band(d);
    for (double m : mu_grid)
        if (std::abs(m) >= band)
            throw Error(errc::bad_input, "phi_KM grid must lie inside the KM band");

    const std::size_t n = mu_grid.size();
    const std::size_t mid = n / 2;
    auto target = [&](double mu) {
        return km_counting(mu, d) + 2.0 * static_cast<double>(k) / V;
    };

    auto solve_at = [&](std::size_t i, double seed, double span) {
        double root = 0.0;
        if (!detail::find_root_near(d, mu_grid[i], target(mu_grid[i]), seed, span, root))
            throw Error(errc::no_root_in_branch,
                        "no solution of the counting equation near phi = " +
                            std::to_string(seed) + " at mu = " + std::to_string(mu_grid[i]));
        return root;
    };

    out.phi[mid] = solve_at(mid, phi_km_large_d_guess(d, mu_grid[mid], k, V), 2.0 * M_PI);
    for (std::size_t i = mid + 1; i < n; ++i) out.phi[i] = solve_at(i, out.phi[i - 1], 0.8);
    for (std::size_t i = mid; i-- > 0;) out.phi[i] = solve_at(i, out.phi[i + 1], 0.8);

    for (std::size_t i = 0; i < n; ++i) {
        out.residual[i] =
            std::abs(phase_function(d, mu_grid[i], out.phi[i]) - target(mu_grid[i]));
        out.max_residual = std::max(out.max_residual, out.residual[i]);
    }
    // continuity audit: flag pi-multiple crossings, reject genuine jumps
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double jump = std::abs(out.phi[i + 1] - out.phi[i]);
        if (jump > 0.75)
            throw Error(errc::branch_jump, "phi branch jumped by " + std::to_string(jump) +
                                               " near mu = " + std::to_string(mu_grid[i]));
        double a = out.phi[i] / M_PI, b = out.phi[i + 1] / M_PI;
        if (std::floor(a) != std::floor(b))
            out.crossings.push_back(0.5 * (mu_grid[i] + mu_grid[i + 1]));
    }
    return out;
}

// Residual of the differential form along the solved branch: central-difference
// phi' substituted into the phase-path density, compared against rho_KM.
inline double ode_residual(const PhaseFunction& pf) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < pf.mu.size(); ++i) {
        double dphi = (pf.phi[i + 1] - pf.phi[i - 1]) / (pf.mu[i + 1] - pf.mu[i - 1]);
        double lhs = smooth_density_phase_path(pf.d, pf.mu[i], pf.phi[i], dphi);
        worst = std::max(worst, std::abs(lhs - kesten_mckay(pf.mu[i], pf.d)));
    }
    return worst;
}

// -- regularized secular density -------------------------------------------------------

// rho(mu) = smooth(mu) + (1/(V pi)) d/dmu Im sum_{t<=tmax} tr U(mu+i eps)^t / t,
// the truncated, eps-shifted reading of the formal trace formula. The phi
// argument is either constant or a solved Kesten-McKay branch (matched to the
// same grid). Traces are taken through the eigenvalues of U.
inline DensityCurve density_from_secular(const RegularGraph& g,
                                         const std::vector<double>& mu_grid,
                                         const std::function<double(std::size_t)>& phi_at,
                                         const std::function<double(std::size_t)>& smooth_at,
                                         double eps, int t_max) {
    const int n2e = g.directed_edge_count();
    const Matrix B = edge_B(g);
    const Matrix J = edge_J(g);
    const double d = g.degree();
    const std::size_t n = mu_grid.size();

    std::vector<double> s_im(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = phi_at(i);
        const Complex beta = std::polar(1.0, phi);
        const Complex mu_c(mu_grid[i], eps);
        const Complex alpha = (1.0 - beta * beta) / (mu_c - d * beta);
        CMatrix U = alpha * B.cast<Complex>() - beta * J.cast<Complex>();
        Eigen::ComplexEigenSolver<CMatrix> es(U, false);
        Complex acc(0.0, 0.0);
        for (int t = 1; t <= t_max; ++t) {
            Complex tr(0.0, 0.0);
            for (int j = 0; j < n2e; ++j) tr += std::pow(es.eigenvalues()[j], t);
            acc += tr / static_cast<double>(t);
        }
        s_im[i] = acc.imag();
    }

    DensityCurve c;
    c.mu = mu_grid;
    c.rho.assign(n, 0.0);
    c.provenance = "secular(eps=" + std::to_string(eps) + ",tmax=" + std::to_string(t_max) + ")";
    const int V = g.vertex_count();
    for (std::size_t i = 0; i < n; ++i) {
        double fluct = 0.0;
        if (i > 0 && i + 1 < n)
            fluct = (s_im[i + 1] - s_im[i - 1]) / (mu_grid[i + 1] - mu_grid[i - 1]);
        else if (i == 0)
            fluct = (s_im[1] - s_im[0]) / (mu_grid[1] - mu_grid[0]);
        else
            fluct = (s_im[i] - s_im[i - 1]) / (mu_grid[i] - mu_grid[i - 1]);
        c.rho[i] = smooth_at(i) + fluct / (V * M_PI);
    }
    return c;
}

inline DensityCurve density_from_secular_const_phi(const RegularGraph& g,
                                                   const std::vector<double>& mu_grid,
                                                   double phi, double eps, int t_max) {
    return density_from_secular(
        g, mu_grid, [&](std::size_t) { return phi; },
        [&](std::size_t i) { return smooth_density_const_phi(mu_grid[i], g.degree(), phi); },
        eps, t_max);
}

// Resummed contribution of the 2-periodic-orbit family (all repetitions of a
// back-and-forth pair): (1/(V pi)) Im d/dmu [ -E log(1 - (alpha - beta)^2) ].
// Added to the Lorentzian smooth term it cancels the 1/mu^2 tails. Follows
// alpha(mu) off the (-d, d) domain, where the tails live.
inline double two_orbit_tail_term(const RegularGraph& g, double mu, double phi) {
    const double d = g.degree();
    const Complex beta = std::polar(1.0, phi);
    const Complex denom = Complex(mu, 0.0) - d * beta;
    const Complex alpha = (1.0 - beta * beta) / denom;
    const Complex ab = alpha - beta;
    const Complex x = ab * ab;
    const Complex dalpha = -alpha / denom;
    const Complex dx = 2.0 * ab * dalpha;
    const Complex val = static_cast<double>(g.edge_count()) * dx / (1.0 - x);
    return val.imag() / (g.vertex_count() * M_PI);
}

}  // namespace regraph

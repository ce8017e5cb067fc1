#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "regraph/ensemble.hpp"
#include "regraph/trace_formula.hpp"

using namespace regraph;

namespace {

RegularGraph ramanujan_sample(int V, int d, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.V = V;
    spec.d = d;
    spec.seed = seed;
    for (std::uint64_t i = 0;; ++i) {
        RegularGraph g = sample_regular(spec, i);
        auto s = adjacency_spectrum(g);
        if (non_ramanujan_set(s, d).empty()) return g;
    }
}

}  // namespace

TEST_CASE("y_0, y_1, y_2 closed forms", "[trace]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        const int V = g.vertex_count();
        const double d = g.degree();
        for (double w : {1.0, 1.3}) {
            TraceCoefficients tc = compute_y(g, w, 2);
            CHECK(tc.y[0] == Catch::Approx(d - 1.0 / V).margin(1e-12));
            CHECK(tc.y[1] ==
                  Catch::Approx(-std::sqrt((d - w) / w) / V).margin(1e-12));
            CHECK(tc.y[2] == Catch::Approx(d * (1.0 - w) * (1.0 - w) / (w * (d - w)) -
                                           (d - w) / (w * V))
                                 .margin(1e-12));
        }
    }
}

TEST_CASE("K4: y_3 at w=1 is sqrt(2)", "[trace]") {
    TraceCoefficients tc = compute_y(complete_graph(4), 1.0, 3);
    CHECK(tc.y[3] == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("bipartite input is rejected", "[trace]") {
    CHECK_THROWS_MATCHES(compute_y(complete_bipartite(3, 3), 1.0, 4), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::bipartite_input;
                         }));
}

TEST_CASE("magnetic y_t with zero phases differs only by the trivial term", "[trace]") {
    RegularGraph g = petersen_graph();
    MagneticDecoration zero = decorate_magnetic(g, 1u, true);
    const int t_max = 8;
    TraceCoefficients plain = compute_y(g, 1.0, t_max);
    TraceCoefficients mag = compute_y_magnetic(g, zero, t_max);
    const double d = g.degree();
    for (int t = 0; t <= t_max; ++t) {
        double trivial = std::pow(d - 1.0, t) /
                         (g.vertex_count() * std::pow(std::sqrt(d - 1.0), t));
        CHECK(mag.y[t] == Catch::Approx(plain.y[t] + trivial).margin(1e-9));
    }
}

TEST_CASE("magnetic trace identity via the decorated mapping", "[trace]") {
    RegularGraph g = petersen_graph();
    MagneticDecoration m = decorate_magnetic(g, 77u);
    const int t_max = 12;
    TraceCoefficients mag = compute_y_magnetic(g, m, t_max);
    SpectralData spec = adjacency_spectrum(adjacency_magnetic(g, m));
    auto rhs = y_magnetic_eigenvalue_side(spec, g.vertex_count(), g.degree(), t_max);
    for (int t = 0; t <= t_max; ++t) CHECK(mag.y[t] == Catch::Approx(rhs[t]).margin(1e-8));
}

TEST_CASE("trace identity, matrix side vs eigenvalue side", "[trace]") {
    SECTION("K4 at w=1") {
        CHECK(verify_ywt_identity(complete_graph(4), 1.0, 20) < 1e-8);
    }
    SECTION("Petersen at w=1.3") {
        CHECK(verify_ywt_identity(petersen_graph(), 1.3, 20) < 1e-8);
    }
    SECTION("random V=50 graph at w=1.5") {
        EnsembleSpec spec;
        spec.V = 50;
        spec.d = 3;
        spec.seed = 99;
        RegularGraph g = sample_regular(spec, 0);
        CHECK(verify_ywt_identity(g, 1.5, 20) < 1e-6);
    }
}

TEST_CASE("smooth density reductions and normalization", "[trace]") {
    SECTION("w=1 reduces to Kesten-McKay") {
        for (int d : {3, 4, 5}) {
            const double band = 2.0 * std::sqrt(d - 1.0);
            for (int i = 1; i < 1000; ++i) {
                double mu = -band + 2.0 * band * i / 1000.0 * 0.999;
                if (std::abs(mu) >= band) continue;
                CHECK(rho_smooth(mu, d, 1.0) ==
                      Catch::Approx(kesten_mckay(mu, d)).margin(1e-12));
            }
        }
    }
    SECTION("even in mu for every w") {
        for (double w : {1.0, 1.2, 1.5, 1.7}) {
            for (double mu : {0.3, 1.1, 2.0})
                CHECK(rho_smooth(mu, 5, w) == Catch::Approx(rho_smooth(-mu, 5, w)).epsilon(1e-13));
        }
    }
    SECTION("integrates to one for the Figure-1 family (d=5)") {
        // mu = band sin(theta) removes the inverse-sqrt edge factor; the
        // Gauss-Legendre nodes stay strictly interior
        for (double w : {1.0, 1.2, 1.5, 1.7}) {
            const double band = 2.0 * std::sqrt(w * (5.0 - w));
            double integral = integrate_gl(
                [&](double th) { return rho_smooth(band * std::sin(th), 5, w) * band * std::cos(th); },
                -M_PI / 2.0, M_PI / 2.0, 256);
            CHECK(integral == Catch::Approx(1.0).margin(1e-6));
        }
    }
    SECTION("monotone deformation at the center (Figure 1 family)") {
        // larger w widens the band and lowers the center value
        double prev = rho_smooth(0.0, 5, 1.0);
        for (double w : {1.2, 1.5, 1.7}) {
            double cur = rho_smooth(0.0, 5, w);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SECTION("out-of-support and pole errors") {
        CHECK_THROWS_MATCHES(rho_smooth(3.0, 3, 1.0), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == errc::out_of_support;
                             }));
    }
}

TEST_CASE("correction density", "[trace]") {
    SECTION("w=1 matches the explicit specialization") {
        for (int d : {3, 4, 5}) {
            const double band = 2.0 * std::sqrt(d - 1.0);
            for (int i = 1; i < 1000; ++i) {
                double mu = (-band + 2.0 * band * i / 1000.0) * 0.999;
                if (std::abs(mu) >= band || std::abs(d - mu) < 1e-9) continue;
                double expected = -(1.0 + mu + mu * mu - 2.0 * (d - 1.0) +
                                    (d - 2.0) / (d - mu)) /
                                  (2.0 * M_PI * std::sqrt(band * band - mu * mu));
                CHECK(rho_corr(mu, d, 1.0) == Catch::Approx(expected).margin(1e-12));
            }
        }
    }
    SECTION("hand value at mu=0, d=3, w=1") {
        CHECK(rho_corr(0.0, 3, 1.0) ==
              Catch::Approx(2.0 / (3.0 * M_PI * std::sqrt(2.0))).epsilon(1e-12));
    }
    SECTION("odd term breaks evenness") {
        CHECK(rho_corr(0.7, 3, 1.0) != Catch::Approx(rho_corr(-0.7, 3, 1.0)).epsilon(1e-6));
    }
    SECTION("integrates to -1") {
        for (double w : {1.0, 1.3}) {
            const double band = 2.0 * std::sqrt(w * (3.0 - w));
            double integral = integrate_gl(
                [&](double th) { return rho_corr(band * std::sin(th), 3, w) * band * std::cos(th); },
                -M_PI / 2.0, M_PI / 2.0, 384);
            CHECK(integral == Catch::Approx(-1.0).margin(1e-6));
        }
    }
}

TEST_CASE("y_t stays bounded on Ramanujan graphs", "[trace]") {
    RegularGraph g = ramanujan_sample(20, 5, 4);
    const double d = g.degree();
    const double bound = 1.0 / g.vertex_count() + (d - 2.0) + 2.0;
    for (double w : {1.0, 1.5, 2.0}) {  // w in [1, (d-1)/2]
        TraceCoefficients tc = compute_y(g, w, 40);
        for (double v : tc.y) CHECK(std::abs(v) <= bound + 1e-9);
    }
}

TEST_CASE("density reconstruction", "[trace][slow]") {
    RegularGraph g = ramanujan_sample(50, 3, 123);

    SECTION("L2 distance to the coarse empirical density decreases in t_max") {
        double prev = -1.0;
        for (int t_max : {20, 40, 60}) {
            TraceFormulaDecomposition dec = reconstruct_density(g, 1.0, t_max, 600);
            double l2 = 0.0;
            for (std::size_t i = 0; i < dec.smooth.mu.size(); ++i) {
                double rec = dec.smooth.rho[i] + dec.oscillatory.rho[i] + dec.correction.rho[i];
                double diff = rec - dec.empirical_coarse.rho[i];
                l2 += diff * diff;
            }
            l2 = std::sqrt(l2 / dec.smooth.mu.size());
            if (prev >= 0.0) CHECK(l2 < prev);
            prev = l2;
        }
    }

    SECTION("reconstructions at w=1 and w=1.2 agree on the common interior") {
        // The truncated series is a resolution-1/t_max smoothing of the same
        // eigenvalue comb for either w, so the integrated densities (counting
        // functions) must coincide up to the coarse-graining scale; pointwise
        // values may differ by ringing around the comb peaks.
        const int t_max = 80;
        TraceFormulaDecomposition a = reconstruct_density(g, 1.0, t_max, 2000);
        TraceFormulaDecomposition b = reconstruct_density(g, 1.2, t_max, 2000);
        auto counting = [](const TraceFormulaDecomposition& dec) {
            std::vector<double> n(dec.smooth.mu.size(), 0.0);
            for (std::size_t i = 1; i < n.size(); ++i) {
                double fa = dec.smooth.rho[i - 1] + dec.oscillatory.rho[i - 1] +
                            dec.correction.rho[i - 1];
                double fb = dec.smooth.rho[i] + dec.oscillatory.rho[i] + dec.correction.rho[i];
                n[i] = n[i - 1] + 0.5 * (fa + fb) * (dec.smooth.mu[i] - dec.smooth.mu[i - 1]);
            }
            return n;
        };
        auto na = counting(a), nb = counting(b);
        const double band1 = 2.0 * std::sqrt(2.0);
        // align the two counting functions at the left end of the window
        auto value_at = [](const std::vector<double>& mus, const std::vector<double>& ns,
                           double mu) {
            auto it = std::lower_bound(mus.begin(), mus.end(), mu);
            std::size_t j = std::min<std::size_t>(mus.size() - 1,
                                                  std::max<std::ptrdiff_t>(1, it - mus.begin()));
            double t = (mu - mus[j - 1]) / (mus[j] - mus[j - 1]);
            return ns[j - 1] + t * (ns[j] - ns[j - 1]);
        };
        double offset = value_at(b.smooth.mu, nb, -0.85 * band1) -
                        value_at(a.smooth.mu, na, -0.85 * band1);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.smooth.mu.size(); ++i) {
            double mu = a.smooth.mu[i];
            if (std::abs(mu) > 0.85 * band1) continue;
            double diff = value_at(b.smooth.mu, nb, mu) - na[i] - offset;
            worst = std::max(worst, std::abs(diff));
        }
        CHECK(worst < 0.02);
    }
}

TEST_CASE("reconstruction mass is (V-1)/V for any truncation", "[trace]") {
    // Only the t=0 Chebyshev coefficient carries mass: the truncated
    // oscillatory part integrates to zero exactly, the smooth part to 1, the
    // correction to -1/V, for every t_max.
    RegularGraph g = petersen_graph();
    const int V = g.vertex_count();
    const double w = 1.0;
    const double band = 2.0 * std::sqrt(w * (g.degree() - w));
    std::vector<double> y = compute_y(g, w, 60).y;
    for (int t_max : {10, 35, 60}) {
        auto density = [&](double mu) {
            double acc = rho_smooth(mu, g.degree(), w) + rho_corr(mu, g.degree(), w) / V;
            double root = std::sqrt(band * band - mu * mu);
            for (int t = 3; t <= t_max; ++t)
                acc += y[t] * chebyshev_T(t, mu / band) / (M_PI * root);
            return acc;
        };
        double mass = integrate_gl(
            [&](double th) { return density(band * std::sin(th)) * band * std::cos(th); },
            -M_PI / 2.0, M_PI / 2.0, 384);
        CHECK(mass == Catch::Approx((V - 1.0) / V).margin(1e-6));
    }
}

TEST_CASE("ensemble y_t means decay like 1/V", "[trace][slow]") {
    // <y_t> is O(1/V): for t = 3,4,5 the leading cycle counts match the
    // subtracted (d-1)^t exactly, and at t = 6 the doubly-traversed triangles
    // leave a genuine (d-1)^3 / (V (d-1)^3) = 1/V mean. Means are checked
    // against 3 stderr plus a 1/V allowance at each V.
    SECTION("plain ensemble at V=200") {
        EnsembleSpec spec;
        spec.V = 200;
        spec.d = 3;
        spec.seed = 0x515;
        spec.sample_count = 500;
        auto stats = ensemble_average(
            spec, [](const RegularGraph& g, std::mt19937_64&) {
                SpectralData s = adjacency_spectrum(g);
                std::vector<double> v;
                for (int t = 3; t <= 6; ++t)
                    v.push_back((trY_from_spectrum(s, g.vertex_count(), t) -
                                 std::pow(2.0, t)) /
                                (g.vertex_count() * std::pow(std::sqrt(2.0), t)));
                return v;
            });
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(stats.mean[i]) <= 3.0 * stats.stderr_[i] + 1.5 / spec.V);
    }
    SECTION("magnetic ensemble shrinks with V") {
        double prev_bound = 0.0;
        for (int V : {100, 200, 400}) {
            EnsembleSpec spec;
            spec.V = V;
            spec.d = 3;
            spec.seed = 0x516;
            spec.sample_count = V == 400 ? 100 : 150;
            auto stats = ensemble_average(
                spec, [](const RegularGraph& g, std::mt19937_64& rng) {
                    MagneticDecoration m = decorate_magnetic(g, rng);
                    SpectralData s = adjacency_spectrum(adjacency_magnetic(g, m));
                    auto y = y_magnetic_eigenvalue_side(s, g.vertex_count(), g.degree(), 6);
                    return std::vector<double>{y[3], y[4], y[5], y[6]};
                });
            for (int i = 0; i < 4; ++i)
                CHECK(std::abs(stats.mean[i]) <= 3.0 * stats.stderr_[i] + 1.0 / V);
            (void)prev_bound;
        }
    }
}

TEST_CASE("multigraph reconstruction starts the walk sum at t=1", "[trace]") {
    RegularGraph g = RegularGraph::build(2, {{0, 0}, {0, 1}, {1, 1}}, GraphMode::multigraph);
    TraceFormulaDecomposition dec = reconstruct_density(g, 1.0, 30, 200, true);
    CHECK(dec.oscillatory.mu.size() == 200);
    TraceCoefficients tc = compute_y(g, 1.0, 2, true);
    // loops make tr Y nonzero, so the t=1 term genuinely contributes
    CHECK(std::abs(tc.raw_trace[1]) > 0.0);
}

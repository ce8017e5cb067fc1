#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "regraph/bartholdi.hpp"
#include "regraph/ensemble.hpp"
#include "regraph/spectral.hpp"

using namespace regraph;

namespace {

std::vector<std::pair<Complex, Complex>> random_points(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<std::pair<Complex, Complex>> pts;
    while (static_cast<int>(pts.size()) < n) {
        Complex s(u(rng), u(rng));
        Complex w(2.0 * u(rng), 2.0 * u(rng));
        if (std::abs(w * w * s * s - 1.0) < 1e-3) continue;
        pts.emplace_back(s, w);
    }
    return pts;
}

}  // namespace

TEST_CASE("regular Bartholdi identity on K4", "[bartholdi]") {
    RegularGraph g = complete_graph(4);
    auto pts = random_points(20, 1);
    pts.emplace_back(Complex(0.0, 0.0), Complex(0.7, 0.0));  // s = 0: both sides 1
    IdentityReport rep = check_identity(g, BartholdiVariant::regular, pts);
    CHECK(rep.max_abs_residual < 1e-9);
}

TEST_CASE("w = 0 reduces to the Ihara-type statement", "[bartholdi]") {
    RegularGraph g = petersen_graph();
    std::vector<std::pair<Complex, Complex>> pts;
    for (double s : {0.1, 0.25, -0.3}) pts.emplace_back(Complex(s, 0.0), Complex(0.0, 0.0));
    IdentityReport rep = check_identity(g, BartholdiVariant::regular, pts);
    CHECK(rep.max_abs_residual < 1e-11);
}

TEST_CASE("magnetic and weighted variants", "[bartholdi]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        MagneticDecoration m = decorate_magnetic(g, 101u);
        WeightDecoration w = decorate_weighted(g, 202u);
        auto pts = random_points(20, 2);
        CHECK(check_identity(g, BartholdiVariant::magnetic, pts, &m, nullptr).max_abs_residual <
              1e-9);
        CHECK(check_identity(g, BartholdiVariant::weighted, pts, nullptr, &w).max_abs_residual <
              1e-9);
    }
}

TEST_CASE("exact rational certification", "[bartholdi]") {
    std::vector<std::pair<Rational, Rational>> pts = {
        {Rational(1, 3), Rational(2, 5)},
        {Rational(-2, 7), Rational(3, 2)},
        {Rational(1, 10), Rational(-4, 3)},
        {Rational(0), Rational(1)},
    };
    SECTION("K4 and Petersen") {
        CHECK(check_identity_exact(complete_graph(4), pts));
        CHECK(check_identity_exact(petersen_graph(), pts));
    }
    SECTION("random regular multigraph") {
        auto rng = sample_rng(7, 3);
        RegularGraph g = sample_regular_multigraph(8, 4, rng);
        CHECK(check_identity_exact(g, pts));
    }
    SECTION("one-vertex loop multigraph (A_00 = 2 convention)") {
        GeneralGraph g{1, {{0, 0}}};
        CHECK(check_identity_exact(g, pts));
    }
    SECTION("irregular path graph uses the degree matrix") {
        GeneralGraph p3{3, {{0, 1}, {1, 2}}};
        CHECK(check_identity_exact(p3, pts));
        IdentityReport rep = check_identity(p3, BartholdiVariant::general, random_points(10, 4));
        CHECK(rep.max_abs_residual < 1e-10);
    }
}

TEST_CASE("pole points are rejected", "[bartholdi]") {
    RegularGraph g = complete_graph(4);
    std::vector<std::pair<Complex, Complex>> pts = {{Complex(0.5, 0.0), Complex(2.0, 0.0)}};
    CHECK_THROWS_MATCHES(check_identity(g, BartholdiVariant::regular, pts), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::pole_point; }));
}

TEST_CASE("edge characteristic polynomial", "[bartholdi]") {
    RegularGraph g = complete_graph(4);
    SECTION("K4 at w=1 matches the factored vertex side") {
        QPoly lhs = char_poly_edge(g, Rational(1));
        // (1-s^2)^2 (1+2s^2-3s) (1+2s^2+s)^3, from the K4 spectrum {3,-1,-1,-1}
        QPoly one_minus_s2, f3, f1;
        one_minus_s2.c = {Rational(1), Rational(0), Rational(-1)};
        f3.c = {Rational(1), Rational(-3), Rational(2)};
        f1.c = {Rational(1), Rational(1), Rational(2)};
        QPoly expected = one_minus_s2.pow(2) * f3 * f1.pow(3);
        CHECK(lhs == expected);
        CHECK(lhs == char_poly_vertex_side(g, Rational(1)));
    }
    SECTION("constant term 1 and matching degree at several w") {
        for (const Rational& w : {Rational(0), Rational(1), Rational(3, 2)}) {
            QPoly lhs = char_poly_edge(g, w);
            QPoly rhs = char_poly_vertex_side(g, w);
            CHECK(lhs == rhs);
            CHECK(lhs.coeff(0) == Rational(1));
        }
    }
    SECTION("w=0 gives det(I - sB) = det(I - sA)") {
        QPoly lhs = char_poly_edge(g, Rational(0));
        // det(I - sA) for K4: (1-3s)(1+s)^3
        QPoly a, b;
        a.c = {Rational(1), Rational(-3)};
        b.c = {Rational(1), Rational(1)};
        QPoly expected = a * b.pow(3);
        CHECK(lhs == expected);
    }
    SECTION("roots at w=1 are reciprocals of the predicted Y spectrum") {
        QPoly p = char_poly_edge(g, Rational(1));
        std::vector<double> coeffs;
        for (const Rational& c : p.c) coeffs.push_back(c.convert_to<double>());
        auto spec = adjacency_spectrum(g);
        auto predicted = edge_spectrum_from_vertex(spec, 1.0, g.edge_count(), g.vertex_count());
        for (const Complex& lambda : predicted) {
            Complex s = 1.0 / lambda;
            Complex acc(0.0, 0.0);
            for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
            CHECK(std::abs(acc) < 1e-9);
        }
    }
}

TEST_CASE("one-vertex loop multigraph characteristic polynomial by hand", "[bartholdi]") {
    // det(I_2 - s(B - wJ)) = 1 - 2s + s^2(2w - w^2) for the single loop
    GeneralGraph g{1, {{0, 0}}};
    QPoly p = char_poly_edge(g, Rational(2, 3));
    QPoly expected;
    expected.c = {Rational(1), Rational(-2), Rational(2) * Rational(2, 3) - Rational(4, 9)};
    CHECK(p == expected);
}

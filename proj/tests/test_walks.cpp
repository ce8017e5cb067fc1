#include <catch2/catch_amalgamated.hpp>

#include "regraph/operators.hpp"
#include "regraph/walks.hpp"
#include "oracles.hpp"

using namespace regraph;

TEST_CASE("K4 hand-checked walk counts", "[walks]") {
    RegularGraph g = complete_graph(4);
    WalkCountTable t = enumerate_walks(g, 5);
    // no 1-periodic walks on a simple graph
    for (int gbs = 0; gbs <= 1; ++gbs) CHECK(t.at(1, gbs) == 0);
    // 2-periodic walks all back-scatter at both turns
    CHECK(t.at(2, 0) == 0);
    CHECK(t.at(2, 1) == 0);
    CHECK(t.at(2, 2) == 12);
    // 4 triangles x 3 basepoints x 2 directions
    CHECK(t.at(3, 0) == 24);
    CHECK(t.at(3, 1) == 0);
    // 5-periodic with exactly one back-scatter: triangle plus pendant edge
    CHECK(t.at(5, 1) == 120);
}

TEST_CASE("enumeration equals polynomial extraction", "[walks]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        const int t_max = 8;
        WalkCountTable enumt = enumerate_walks(g, t_max);
        WalkCountTable polyt = table_from_polynomials(trY_polynomial(g, t_max));
        for (int t = 1; t <= t_max; ++t)
            for (int gbs = 0; gbs <= t; ++gbs) CHECK(enumt.at(t, gbs) == polyt.at(t, gbs));
    }
}

TEST_CASE("row sums and special evaluations of tr Y^t(w)", "[walks]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        const int t_max = 8;
        auto traces = trY_polynomial(g, t_max);
        auto trY1 = trY1_powers(g, t_max);
        Matrix y1 = edge_Y(g, 1.0);
        Matrix p = y1;
        for (int t = 1; t <= t_max; ++t) {
            // total walks: evaluation at u = 1 (w = 0) equals tr B^t = tr A^t
            BigInt total(0);
            for (int gbs = 0; gbs <= t; ++gbs) total += traces[t].coeff(gbs);
            CHECK(total == BigInt(test_oracles::closed_walks(g, t)));
            // nb-walks: evaluation at u = 0 (w = 1) equals integer tr Y^t
            CHECK(traces[t].coeff(0) == trY1[t]);
            // and the floating matrix power agrees
            CHECK(std::abs(trY1[t].convert_to<double>() - p.trace()) < 1e-6);
            p = p * y1;
        }
    }
}

TEST_CASE("closed form for N(l;1)", "[walks]") {
    SECTION("K4: enumeration, polynomial and closed form for l <= 10") {
        RegularGraph g = complete_graph(4);
        const int l_max = 10;
        auto trY1 = trY1_powers(g, l_max);
        auto traces = trY_polynomial(g, l_max);
        WalkCountTable enumt = enumerate_walks(g, l_max);
        CHECK(trY1[2] == 0);  // simple graph: even-case k=1 term vanishes
        for (int l = 3; l <= l_max; ++l) {
            BigInt closed = n_t1_closed_form(g.degree(), l, trY1);
            CHECK(closed == traces[l].coeff(1));
            CHECK(closed == enumt.at(l, 1));
        }
        CHECK(n_t1_closed_form(3, 5, trY1) == 120);
        CHECK(n_t1_closed_form(3, 4, trY1) == 0);
        CHECK(n_t1_closed_form(3, 3, trY1) == 0);  // empty sum
    }
    SECTION("Petersen: polynomial and closed form for l <= 10") {
        RegularGraph g = petersen_graph();
        const int l_max = 10;
        auto trY1 = trY1_powers(g, l_max);
        auto traces = trY_polynomial(g, l_max);
        for (int l = 3; l <= l_max; ++l)
            CHECK(n_t1_closed_form(g.degree(), l, trY1) == traces[l].coeff(1));
    }
}

TEST_CASE("bipartite parity: no odd periodic walks", "[walks]") {
    RegularGraph g = complete_bipartite(3, 3);
    WalkCountTable t = enumerate_walks(g, 7);
    for (int len : {1, 3, 5, 7})
        for (int gbs = 0; gbs <= len; ++gbs) CHECK(t.at(len, gbs) == 0);
}

TEST_CASE("enumeration budget guard", "[walks]") {
    CHECK_THROWS_MATCHES(enumerate_walks(petersen_graph(), 20), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::budget_exceeded;
                         }));
}

TEST_CASE("a_l coefficients vanish exactly at finite V", "[walks]") {
    SECTION("K4, l = 4..10") {
        RegularGraph g = complete_graph(4);
        auto traces = trY_polynomial(g, 12);
        for (int l = 4; l <= 10; ++l) {
            ALValue a = a_l_exact(g, l, traces);
            CHECK(a.bulk.is_zero());
            CHECK(a.raw.is_zero());
        }
    }
    SECTION("Petersen, l = 4..12") {
        RegularGraph g = petersen_graph();
        auto traces = trY_polynomial(g, 14);
        for (int l = 4; l <= 12; ++l) {
            ALValue a = a_l_exact(g, l, traces);
            CHECK(a.bulk.is_zero());
            CHECK(a.raw.is_zero());
        }
    }
}

TEST_CASE("a_l report covers both evaluations", "[walks]") {
    ALReport rep = verify_a_l_vanishing(complete_graph(4), 8);
    CHECK(rep.all_bulk_zero);
    CHECK(rep.all_raw_zero);
    CHECK(rep.values[5].raw.is_zero());
}

TEST_CASE("p/q tail recursion holds exactly", "[walks]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        auto traces = trY_polynomial(g, 12);
        for (int l = 3; l <= 10; ++l) CHECK(pq_recursion_holds(g, l, traces));
    }
}

#include <catch2/catch_amalgamated.hpp>

#include "regraph/ensemble.hpp"
#include "regraph/operators.hpp"
#include "regraph/spectral.hpp"
#include "oracles.hpp"

using namespace regraph;

namespace {
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

RegularGraph loop_multigraph() {
    // two vertices, one loop at each, one connecting edge: 3-regular
    return RegularGraph::build(2, {{0, 0}, {0, 1}, {1, 1}}, GraphMode::multigraph);
}
}  // namespace

TEST_CASE("adjacency basics", "[operators]") {
    RegularGraph k4 = complete_graph(4);
    Matrix a = adjacency(k4);
    CHECK(a.rows() == 4);
    CHECK(max_abs(a - a.transpose()) == 0.0);
    for (int i = 0; i < 4; ++i) CHECK(a.row(i).sum() == 3.0);

    auto evals = adjacency_spectrum(k4).eigenvalues;
    CHECK(evals[0] == Catch::Approx(3.0).margin(1e-10));
    for (int k = 1; k < 4; ++k) CHECK(evals[k] == Catch::Approx(-1.0).margin(1e-10));
}

TEST_CASE("loop contributes 2 on the diagonal", "[operators]") {
    RegularGraph g = loop_multigraph();
    Matrix a = adjacency(g);
    CHECK(a(0, 0) == 2.0);
    CHECK(a(1, 1) == 2.0);
    CHECK(a(0, 1) == 1.0);
}

TEST_CASE("magnetic adjacency", "[operators]") {
    RegularGraph g = petersen_graph();
    SECTION("zero phases reduce to the plain adjacency") {
        MagneticDecoration m = decorate_magnetic(g, 7u, /*all_zero=*/true);
        CHECK(max_abs(adjacency_magnetic(g, m) - adjacency(g).cast<Complex>()) == 0.0);
        CHECK(max_abs(edge_B_magnetic(g, m) - edge_B(g).cast<Complex>()) == 0.0);
    }
    SECTION("random phases give a Hermitian matrix") {
        MagneticDecoration m = decorate_magnetic(g, 123u);
        CMatrix a = adjacency_magnetic(g, m);
        CHECK(max_abs(a - a.adjoint()) < 1e-15);
    }
    SECTION("decoration mismatch is rejected") {
        MagneticDecoration m = decorate_magnetic(complete_graph(4), 1u);
        CHECK_THROWS_AS(adjacency_magnetic(g, m), Error);
    }
}

TEST_CASE("weighted operators", "[operators]") {
    RegularGraph g = complete_graph(4);
    SECTION("unit weights reduce to plain A") {
        WeightDecoration w = decorate_weighted(g, 5u, /*all_one=*/true);
        CHECK(max_abs(adjacency_weighted(g, w) - adjacency(g)) == 0.0);
    }
    SECTION("negative weight products make B^(W) complex") {
        WeightDecoration w = decorate_weighted(g, 5u, true);
        w.weight[0] = -0.5;
        CMatrix bw = edge_B_weighted(g, w);
        double max_imag = bw.imag().cwiseAbs().maxCoeff();
        CHECK(max_imag > 0.0);
    }
    SECTION("weighted degree sums incoming edge weights") {
        WeightDecoration w = decorate_weighted(g, 6u);
        Matrix dw = degree_weighted(g, w);
        double expect = 0.0;
        for (int k = 0; k < g.edge_count(); ++k)
            if (g.edges()[k].first == 0 || g.edges()[k].second == 0) expect += w.weight[k];
        CHECK(dw(0, 0) == Catch::Approx(expect).margin(1e-14));
    }
}

TEST_CASE("Laplacian is positive semidefinite with a zero mode", "[operators]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(g), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) == Catch::Approx(0.0).margin(1e-10));
        CHECK(es.eigenvalues()(0) > -1e-10);
        CHECK(es.eigenvalues()(1) > 1e-8);  // connected: simple zero eigenvalue
    }
}

TEST_CASE("edge operators structural facts", "[operators]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph()}) {
        Matrix B = edge_B(g), J = edge_J(g);
        const int n = g.directed_edge_count();
        CHECK(B.trace() == 0.0);  // simple graph: no directed edge follows itself
        CHECK(max_abs(J * J - Matrix::Identity(n, n)) == 0.0);
        CHECK(max_abs(J - J.transpose()) == 0.0);
        for (int e = 0; e < n; ++e) {
            CHECK(B.row(e).sum() == g.degree());
            CHECK(B.col(e).sum() == g.degree());
        }
        CHECK(max_abs(edge_Y(g, 0.0) - B) == 0.0);
    }
}

TEST_CASE("tr B^t = tr A^t for t <= 8", "[operators]") {
    for (const RegularGraph& g :
         {complete_graph(4), petersen_graph(), complete_bipartite(3, 3), loop_multigraph()}) {
        Matrix B = edge_B(g);
        Matrix p = B;
        for (int t = 1; t <= 8; ++t) {
            long long walks = test_oracles::closed_walks(g, t);
            CHECK(p.trace() == Catch::Approx(static_cast<double>(walks)).margin(1e-6));
            p = p * B;
        }
    }
}

TEST_CASE("K4 walk traces", "[operators]") {
    RegularGraph g = complete_graph(4);
    Matrix B = edge_B(g);
    Matrix Y = edge_Y(g, 1.0);
    CHECK((B * B * B).trace() == Catch::Approx(24.0));      // tr B^3 = tr A^3
    CHECK((Y * Y).trace() == Catch::Approx(0.0).margin(1e-12));
    CHECK((Y * Y * Y).trace() == Catch::Approx(24.0));      // 4 triangles x 3 basepoints x 2
}

TEST_CASE("incidence-half identities hold exactly", "[operators]") {
    for (const RegularGraph& g : {complete_graph(4), petersen_graph(), loop_multigraph()}) {
        auto h = incidence_halves(g);
        Matrix B = edge_B(g), J = edge_J(g), A = adjacency(g);
        const int n = g.directed_edge_count();
        CHECK(max_abs(h.plus * h.minus.transpose() - B) == 0.0);
        CHECK(max_abs(h.minus.transpose() * h.plus - A) == 0.0);
        CHECK(max_abs(h.plus.transpose() * h.plus -
                      static_cast<double>(g.degree()) *
                          Matrix::Identity(g.vertex_count(), g.vertex_count())) == 0.0);
        Matrix Y = B - J;
        CHECK(max_abs(h.plus * h.plus.transpose() - (Y * J + Matrix::Identity(n, n))) == 0.0);
    }
}

TEST_CASE("magnetic incidence-half identities", "[operators]") {
    RegularGraph g = petersen_graph();
    MagneticDecoration m = decorate_magnetic(g, 99u);
    auto h = incidence_halves_magnetic(g, m);
    CMatrix B = edge_B_magnetic(g, m);
    CMatrix A = adjacency_magnetic(g, m);
    CMatrix J = edge_J(g).cast<Complex>();
    const int n = g.directed_edge_count();
    CHECK(max_abs(h.plus * h.minus.adjoint() - B) < 1e-14);
    CHECK(max_abs(h.minus.adjoint() * h.plus - A) < 1e-14);
    CHECK(max_abs(h.plus.adjoint() * h.plus -
                  static_cast<double>(g.degree()) *
                      CMatrix::Identity(g.vertex_count(), g.vertex_count())) < 1e-14);
    CMatrix Y = B - J;
    CHECK(max_abs(h.plus * h.plus.adjoint() - (Y * J + CMatrix::Identity(n, n))) < 1e-14);
}

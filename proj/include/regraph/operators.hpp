#pragma once

#include <Eigen/Dense>

#include <complex>

#include "regraph/graph.hpp"

namespace regraph {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// -- vertex-space matrices ----------------------------------------------------

// Plain adjacency: A[i][j] = number of edges between i and j, loops counted
// twice on the diagonal.
inline Matrix adjacency(const RegularGraph& g) {
    Matrix a = Matrix::Zero(g.vertex_count(), g.vertex_count());
    for (const auto& b : g.edges()) {
        if (b.first == b.second)
            a(b.first, b.first) += 2.0;
        else {
            a(b.first, b.second) += 1.0;
            a(b.second, b.first) += 1.0;
        }
    }
    return a;
}

// Magnetic adjacency A^(M)[i][j] = A[i][j] e^{i phi_ij}, Hermitian by the
// antisymmetry of the phases.
inline CMatrix adjacency_magnetic(const RegularGraph& g, const MagneticDecoration& m) {
    m.check(g);
    CMatrix a = CMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (int k = 0; k < g.edge_count(); ++k) {
        const auto& b = g.edges()[k];
        Complex ph = std::polar(1.0, m.phase[k]);
        if (b.first == b.second) {
            // The two orientations carry opposite phases; their sum is real.
            a(b.first, b.first) += ph + std::conj(ph);
        } else {
            a(b.first, b.second) += ph;
            a(b.second, b.first) += std::conj(ph);
        }
    }
    return a;
}

// Weighted adjacency A^(W)[i][j] = A[i][j] W[i][j].
inline Matrix adjacency_weighted(const RegularGraph& g, const WeightDecoration& w) {
    w.check(g);
    Matrix a = Matrix::Zero(g.vertex_count(), g.vertex_count());
    for (int k = 0; k < g.edge_count(); ++k) {
        const auto& b = g.edges()[k];
        if (b.first == b.second)
            a(b.first, b.first) += 2.0 * w.weight[k];
        else {
            a(b.first, b.second) += w.weight[k];
            a(b.second, b.first) += w.weight[k];
        }
    }
    return a;
}

inline Matrix degree_matrix(const RegularGraph& g) {
    return Matrix::Identity(g.vertex_count(), g.vertex_count()) * static_cast<double>(g.degree());
}

// L = -A + D, positive semidefinite, kernel spanned by constants when connected.
inline Matrix laplacian(const RegularGraph& g) { return -adjacency(g) + degree_matrix(g); }

// -- edge-space matrices ------------------------------------------------------

// B[e][e'] = 1 iff e' follows e, i.e. t(e) = o(e').
inline Matrix edge_B(const RegularGraph& g) {
    const int n = g.directed_edge_count();
    Matrix b = Matrix::Zero(n, n);
    for (int e = 0; e < n; ++e)
        for (int f : g.out_edges()[g.terminus(e)]) b(e, f) = 1.0;
    return b;
}

// J[e][e'] = 1 iff e' is the reversal of e.
inline Matrix edge_J(const RegularGraph& g) {
    const int n = g.directed_edge_count();
    Matrix j = Matrix::Zero(n, n);
    for (int e = 0; e < n; ++e) j(e, RegularGraph::reversal(e)) = 1.0;
    return j;
}

// Y(w) = B - w J. At w = 1 this is the Hashimoto non-backtracking matrix.
inline Matrix edge_Y(const RegularGraph& g, double w) { return edge_B(g) - w * edge_J(g); }

inline CMatrix edge_Y(const RegularGraph& g, Complex w) {
    return edge_B(g).cast<Complex>() - w * edge_J(g).cast<Complex>();
}

// Magnetic B^(M)[e][e'] = B[e][e'] e^{(i/2)(phi_e + phi_e')}.
inline CMatrix edge_B_magnetic(const RegularGraph& g, const MagneticDecoration& m) {
    m.check(g);
    const int n = g.directed_edge_count();
    CMatrix b = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e)
        for (int f : g.out_edges()[g.terminus(e)])
            b(e, f) = std::polar(1.0, 0.5 * (m.directed_phase(e) + m.directed_phase(f)));
    return b;
}

inline CMatrix edge_Y_magnetic(const RegularGraph& g, const MagneticDecoration& m, double w) {
    return edge_B_magnetic(g, m) - w * edge_J(g).cast<Complex>();
}

// Weighted B^(W)[e][e'] = B[e][e'] sqrt(W_e) sqrt(W_e'), complex in general.
// The root of each factor is taken separately (the incidence-half decoration
// scales rows by sqrt(W_e)); collapsing to sqrt(W_e W_e') flips the sign when
// both weights are negative and breaks the determinant identity.
inline CMatrix edge_B_weighted(const RegularGraph& g, const WeightDecoration& w) {
    w.check(g);
    const int n = g.directed_edge_count();
    CMatrix b = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e) {
        Complex we = std::sqrt(Complex(w.directed_weight(e), 0.0));
        for (int f : g.out_edges()[g.terminus(e)])
            b(e, f) = we * std::sqrt(Complex(w.directed_weight(f), 0.0));
    }
    return b;
}

// Weighted degree matrix D^(W)[i][i] = sum over e with t(e) = i of W_e.
inline Matrix degree_weighted(const RegularGraph& g, const WeightDecoration& w) {
    w.check(g);
    Matrix d = Matrix::Zero(g.vertex_count(), g.vertex_count());
    for (int e = 0; e < g.directed_edge_count(); ++e)
        d(g.terminus(e), g.terminus(e)) += w.directed_weight(e);
    return d;
}

// The two 2E x V incidence indicators: Bplus[e][i] = 1 iff t(e) = i,
// Bminus[e][i] = 1 iff o(e) = i. They satisfy
//   Bplus Bminus^T = B,   Bminus^T Bplus = A,
//   Bplus^T Bplus  = d I, Bplus Bplus^T  = Y J + I.
struct IncidenceHalf {
    Matrix plus;
    Matrix minus;
};

inline IncidenceHalf incidence_halves(const RegularGraph& g) {
    const int n = g.directed_edge_count();
    IncidenceHalf h{Matrix::Zero(n, g.vertex_count()), Matrix::Zero(n, g.vertex_count())};
    for (int e = 0; e < n; ++e) {
        h.plus(e, g.terminus(e)) = 1.0;
        h.minus(e, g.origin(e)) = 1.0;
    }
    return h;
}

// Magnetic variant: rows scaled by e^{+- (i/2) phi_e}.
struct IncidenceHalfMagnetic {
    CMatrix plus;
    CMatrix minus;
};

inline IncidenceHalfMagnetic incidence_halves_magnetic(const RegularGraph& g,
                                                       const MagneticDecoration& m) {
    m.check(g);
    const int n = g.directed_edge_count();
    IncidenceHalfMagnetic h{CMatrix::Zero(n, g.vertex_count()),
                            CMatrix::Zero(n, g.vertex_count())};
    for (int e = 0; e < n; ++e) {
        h.plus(e, g.terminus(e)) = std::polar(1.0, 0.5 * m.directed_phase(e));
        h.minus(e, g.origin(e)) = std::polar(1.0, -0.5 * m.directed_phase(e));
    }
    return h;
}

}  // namespace regraph

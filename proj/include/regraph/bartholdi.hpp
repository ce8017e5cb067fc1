#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "regraph/exact.hpp"
#include "regraph/graph.hpp"
#include "regraph/operators.hpp"

namespace regraph {

// Minimal graph carrier for the identity checks: loops, parallel edges and
// irregular degree sequences are all allowed here (and only here). Directed
// edge k of undirected edge b is 2b (first->second) / 2b+1 (second->first).
struct GeneralGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    static GeneralGraph from(const RegularGraph& g) {
        return GeneralGraph{g.vertex_count(), g.edges()};
    }

    int edge_count() const { return static_cast<int>(edges.size()); }
    int directed_edge_count() const { return 2 * edge_count(); }
    int origin(int e) const { return (e & 1) ? edges[e >> 1].second : edges[e >> 1].first; }
    int terminus(int e) const { return (e & 1) ? edges[e >> 1].first : edges[e >> 1].second; }
    static int reversal(int e) { return e ^ 1; }

    std::vector<int> degrees() const {
        std::vector<int> d(vertex_count, 0);
        for (const auto& b : edges) {
            d[b.first] += 1;
            d[b.second] += 1;
        }
        return d;
    }
    bool is_regular() const {
        auto d = degrees();
        for (int v : d)
            if (v != d[0]) return false;
        return true;
    }
};

enum class BartholdiVariant { regular, general, magnetic, multigraph, weighted };

inline const char* variant_name(BartholdiVariant v) {
    switch (v) {
        case BartholdiVariant::regular: return "regular";
        case BartholdiVariant::general: return "general";
        case BartholdiVariant::magnetic: return "magnetic";
        case BartholdiVariant::multigraph: return "multigraph";
        case BartholdiVariant::weighted: return "weighted";
    }
    return "?";
}

namespace detail {

inline CMatrix general_A(const GeneralGraph& g, const std::vector<double>* phases,
                         const std::vector<double>* weights) {
    CMatrix a = CMatrix::Zero(g.vertex_count, g.vertex_count);
    for (int k = 0; k < g.edge_count(); ++k) {
        const auto& b = g.edges[k];
        Complex f(1.0, 0.0);
        if (phases) f = std::polar(1.0, (*phases)[k]);
        if (weights) f *= (*weights)[k];
        if (b.first == b.second)
            a(b.first, b.first) += f + std::conj(f);
        else {
            a(b.first, b.second) += f;
            a(b.second, b.first) += std::conj(f);
        }
    }
    return a;
}

inline CMatrix general_B(const GeneralGraph& g, const std::vector<double>* phases,
                         const std::vector<double>* weights) {
    const int n = g.directed_edge_count();
    std::vector<std::vector<int>> out(g.vertex_count);
    for (int e = 0; e < n; ++e) out[g.origin(e)].push_back(e);
    auto dphase = [&](int e) {
        double p = (*phases)[e >> 1];
        return (e & 1) ? -p : p;
    };
    CMatrix bm = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e)
        for (int f : out[g.terminus(e)]) {
            Complex val(1.0, 0.0);
            if (phases) val = std::polar(1.0, 0.5 * (dphase(e) + dphase(f)));
            if (weights)
                val *= std::sqrt(Complex((*weights)[e >> 1], 0.0)) *
                       std::sqrt(Complex((*weights)[f >> 1], 0.0));
            bm(e, f) = val;
        }
    return bm;
}

inline CMatrix general_J(const GeneralGraph& g) {
    const int n = g.directed_edge_count();
    CMatrix j = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e) j(e, GeneralGraph::reversal(e)) = 1.0;
    return j;
}

inline CMatrix general_D(const GeneralGraph& g, const std::vector<double>* weights) {
    CMatrix d = CMatrix::Zero(g.vertex_count, g.vertex_count);
    if (weights) {
        for (int e = 0; e < g.directed_edge_count(); ++e)
            d(g.terminus(e), g.terminus(e)) += (*weights)[e >> 1];
    } else {
        auto deg = g.degrees();
        for (int v = 0; v < g.vertex_count; ++v) d(v, v) = static_cast<double>(deg[v]);
    }
    return d;
}

}  // namespace detail

struct IdentityReport {
    std::string graph_id;
    BartholdiVariant variant = BartholdiVariant::regular;
    std::vector<std::pair<Complex, Complex>> points;  // (s, w)
    std::vector<double> residuals;                    // relative, per point
    double max_abs_residual = 0.0;
    bool exact_checked = false;
    bool exact_match = false;
};

// Floating-point check of det(I - s(B - wJ)) =
// (1 - w^2 s^2)^(E-V) det(I + w s^2 (D - wI) - sA) at the given points,
// with B, A, D swapped for their decorated versions per variant.
inline IdentityReport check_identity(const GeneralGraph& g, BartholdiVariant variant,
                                     const std::vector<std::pair<Complex, Complex>>& points,
                                     const std::vector<double>* phases = nullptr,
                                     const std::vector<double>* weights = nullptr,
                                     const std::string& graph_id = "") {
    if (variant == BartholdiVariant::magnetic && !phases)
        throw Error(errc::decoration_mismatch, "magnetic variant needs phases");
    if (variant == BartholdiVariant::weighted && !weights)
        throw Error(errc::decoration_mismatch, "weighted variant needs weights");
    if (variant == BartholdiVariant::regular && !g.is_regular())
        throw Error(errc::non_regular, "regular variant needs a regular graph");

    const std::vector<double>* ph = variant == BartholdiVariant::magnetic ? phases : nullptr;
    const std::vector<double>* wt = variant == BartholdiVariant::weighted ? weights : nullptr;
    const CMatrix A = detail::general_A(g, ph, wt);
    const CMatrix B = detail::general_B(g, ph, wt);
    const CMatrix J = detail::general_J(g);
    const CMatrix D = detail::general_D(g, wt);
    const int n2e = g.directed_edge_count();
    const int V = g.vertex_count;
    const int E = g.edge_count();

    IdentityReport rep;
    rep.graph_id = graph_id;
    rep.variant = variant;
    rep.points = points;
    const CMatrix I2E = CMatrix::Identity(n2e, n2e);
    const CMatrix IV = CMatrix::Identity(V, V);
    for (const auto& [s, w] : points) {
        Complex pole = 1.0 - w * w * s * s;
        if (std::abs(pole) < 1e-9)
            throw Error(errc::pole_point, "w^2 s^2 = 1 is a pole of the identity");
        Complex lhs = (I2E - s * (B - w * J)).determinant();
        Complex rhs = std::pow(pole, E - V) *
                      (IV + w * s * s * (D - w * IV) - s * A).determinant();
        double denom = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        rep.residuals.push_back(std::abs(lhs - rhs) / denom);
        rep.max_abs_residual = std::max(rep.max_abs_residual, rep.residuals.back());
    }
    return rep;
}

inline IdentityReport check_identity(const RegularGraph& g, BartholdiVariant variant,
                                     const std::vector<std::pair<Complex, Complex>>& points,
                                     const MagneticDecoration* m = nullptr,
                                     const WeightDecoration* w = nullptr,
                                     const std::string& graph_id = "") {
    if (m) m->check(g);
    if (w) w->check(g);
    return check_identity(GeneralGraph::from(g), variant, points, m ? &m->phase : nullptr,
                          w ? &w->weight : nullptr, graph_id);
}

namespace detail {

inline ExactMatrix<Rational> exact_Y(const GeneralGraph& g, const Rational& w) {
    const int n = g.directed_edge_count();
    std::vector<std::vector<int>> out(g.vertex_count);
    for (int e = 0; e < n; ++e) out[g.origin(e)].push_back(e);
    ExactMatrix<Rational> y(n, n);
    for (int e = 0; e < n; ++e) {
        for (int f : out[g.terminus(e)]) y(e, f) += 1;
        y(e, GeneralGraph::reversal(e)) -= w;
    }
    return y;
}

inline ExactMatrix<Rational> exact_A(const GeneralGraph& g) {
    ExactMatrix<Rational> a(g.vertex_count, g.vertex_count);
    for (const auto& b : g.edges) {
        if (b.first == b.second)
            a(b.first, b.first) += 2;
        else {
            a(b.first, b.second) += 1;
            a(b.second, b.first) += 1;
        }
    }
    return a;
}

}  // namespace detail

// Exact check at rational points for the undecorated variants. Both sides are
// evaluated in rational arithmetic; the result is an equality, not a residual.
inline bool check_identity_exact(const GeneralGraph& g,
                                 const std::vector<std::pair<Rational, Rational>>& points) {
    const int V = g.vertex_count;
    const int E = g.edge_count();
    const int n2e = g.directed_edge_count();
    const auto deg = g.degrees();
    for (const auto& [s, w] : points) {
        Rational pole = Rational(1) - w * w * s * s;
        if (pole == 0) throw Error(errc::pole_point, "w^2 s^2 = 1 is a pole of the identity");

        ExactMatrix<Rational> lhs_m = ExactMatrix<Rational>::identity(n2e);
        ExactMatrix<Rational> y = detail::exact_Y(g, w);
        for (int i = 0; i < n2e; ++i)
            for (int j = 0; j < n2e; ++j) lhs_m(i, j) -= s * y(i, j);
        Rational lhs = rational_determinant(lhs_m);

        ExactMatrix<Rational> rhs_m = ExactMatrix<Rational>::identity(V);
        ExactMatrix<Rational> a = detail::exact_A(g);
        for (int i = 0; i < V; ++i) {
            rhs_m(i, i) += w * s * s * (Rational(deg[i]) - w);
            for (int j = 0; j < V; ++j) rhs_m(i, j) -= s * a(i, j);
        }
        Rational rhs = rational_determinant(rhs_m);
        const int p = E - V;
        if (p >= 0)
            for (int i = 0; i < p; ++i) rhs *= pole;
        else
            for (int i = 0; i < -p; ++i) rhs /= pole;
        if (lhs != rhs) return false;
    }
    return true;
}

inline bool check_identity_exact(const RegularGraph& g,
                                 const std::vector<std::pair<Rational, Rational>>& points) {
    return check_identity_exact(GeneralGraph::from(g), points);
}

// Coefficients of det(I - s Y(w)) in s, exact: run Faddeev-LeVerrier on Y(w)
// for det(x I - Y) = sum c_k x^(n-k), then det(I - sY) = sum c_k s^k.
inline QPoly char_poly_edge(const GeneralGraph& g, const Rational& w) {
    ExactMatrix<Rational> y = detail::exact_Y(g, w);
    std::vector<Rational> c = char_poly(y);
    QPoly p;
    p.c = std::move(c);
    p.trim();
    return p;
}

inline QPoly char_poly_edge(const RegularGraph& g, const Rational& w) {
    return char_poly_edge(GeneralGraph::from(g), w);
}

// Right-hand side of the regular-graph identity as an exact polynomial in s:
// (1 - w^2 s^2)^(E-V) * s^V chi_A(q(s)/s) with q(s) = 1 + w(d-w) s^2, expanded
// through the characteristic polynomial of A.
inline QPoly char_poly_vertex_side(const GeneralGraph& g, int d, const Rational& w) {
    const int V = g.vertex_count;
    const int E = g.edge_count();
    if (E < V) throw Error(errc::bad_input, "vertex-side expansion needs E >= V");
    std::vector<Rational> chi = char_poly(detail::exact_A(g));  // chi[k] on x^(V-k)
    QPoly q;  // q(s) = 1 + w(d-w) s^2
    q.c = {Rational(1), Rational(0), w * (Rational(d) - w)};
    QPoly acc;
    for (int k = 0; k <= V; ++k) {
        // term chi[k] * q(s)^(V-k) * s^k
        QPoly t = q.pow(V - k) * QPoly::monomial(chi[k], k);
        acc += t;
    }
    QPoly pole;  // 1 - w^2 s^2
    pole.c = {Rational(1), Rational(0), -w * w};
    QPoly result = pole.pow(E - V) * acc;
    result.trim();
    return result;
}

inline QPoly char_poly_vertex_side(const RegularGraph& g, const Rational& w) {
    return char_poly_vertex_side(GeneralGraph::from(g), g.degree(), w);
}

}  // namespace regraph

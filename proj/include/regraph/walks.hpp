#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regraph/exact.hpp"
#include "regraph/graph.hpp"

namespace regraph {

// Exact counts N(t;g) of t-periodic walks with exactly g back-scatters,
// t = 1..t_max. Back-scatters are counted cyclically: the wrap step
// e_t -> e_1 counts, matching the convention implicit in tr Y^t(w).
struct WalkCountTable {
    int t_max = 0;
    std::vector<std::vector<BigInt>> counts;  // counts[t] has t+1 entries, g = 0..t
    std::string provenance;

    BigInt at(int t, int g) const {
        if (t < 1 || t > t_max || g < 0) return BigInt(0);
        if (g >= static_cast<int>(counts[t].size())) return BigInt(0);
        return counts[t][g];
    }
    BigInt total(int t) const {
        BigInt s(0);
        for (const BigInt& c : counts[t]) s += c;
        return s;
    }
    BigInt nb_count(int t) const { return at(t, 0); }
};

namespace detail {

inline void check_enumeration_budget(const RegularGraph& g, int t_max) {
    // 2E * d^(t_max-1) walk prefixes, each O(t) to close out.
    long double work = static_cast<long double>(g.directed_edge_count());
    for (int i = 1; i < t_max; ++i) work *= g.degree();
    if (work > 5e8L)
        throw Error(errc::budget_exceeded,
                    "enumeration budget exceeded for t_max=" + std::to_string(t_max));
}

}  // namespace detail

// Brute-force oracle: depth-first enumeration of closed directed-edge
// sequences, classifying by the cyclic back-scatter count.
inline WalkCountTable enumerate_walks(const RegularGraph& g, int t_max) {
    detail::check_enumeration_budget(g, t_max);
    WalkCountTable table;
    table.t_max = t_max;
    table.provenance = "enumeration";
    table.counts.resize(t_max + 1);
    for (int t = 1; t <= t_max; ++t) table.counts[t].assign(t + 1, BigInt(0));

    std::vector<int> seq;
    for (int t = 1; t <= t_max; ++t) {
        auto& row = table.counts[t];
        // extend(): seq holds edges e_1..e_k with interior back-scatters bs.
        auto extend = [&](auto&& self, int bs) -> void {
            const int k = static_cast<int>(seq.size());
            if (k == t) {
                const int last = seq.back(), first = seq.front();
                if (g.terminus(last) != g.origin(first)) return;
                const int wrap = (first == RegularGraph::reversal(last)) ? 1 : 0;
                row[bs + wrap] += 1;
                return;
            }
            const int prev = seq.back();
            for (int e : g.out_edges()[g.terminus(prev)]) {
                seq.push_back(e);
                self(self, bs + (e == RegularGraph::reversal(prev) ? 1 : 0));
                seq.pop_back();
            }
        };
        for (int e0 = 0; e0 < g.directed_edge_count(); ++e0) {
            seq.assign(1, e0);
            extend(extend, 0);
        }
    }
    return table;
}

// Y(w) rewritten in u = 1 - w: Y = (B - J) + uJ, entries are integer
// polynomials with coefficients in {-1, 0, 1}.
inline ExactMatrix<IPoly> edge_poly_matrix(const RegularGraph& g) {
    const int n = g.directed_edge_count();
    ExactMatrix<IPoly> m(n, n, IPoly(BigInt(0)));
    for (int e = 0; e < n; ++e) {
        for (int f : g.out_edges()[g.terminus(e)]) m(e, f) += IPoly(BigInt(1));
        IPoly u_minus_one;  // u - 1
        u_minus_one.c = {BigInt(-1), BigInt(1)};
        m(e, RegularGraph::reversal(e)) += u_minus_one;
    }
    return m;
}

// tr Y(w)^t as exact polynomials in u = 1 - w for t = 1..t_max; the u^g
// coefficient of entry t is N(t;g).
inline std::vector<IPoly> trY_polynomial(const RegularGraph& g, int t_max) {
    if (g.directed_edge_count() > 200)
        throw Error(errc::budget_exceeded, "exact polynomial traces limited to 2E <= 200");
    ExactMatrix<IPoly> m = edge_poly_matrix(g);
    std::vector<IPoly> traces(t_max + 1);
    ExactMatrix<IPoly> p = m;
    traces[0] = IPoly(BigInt(g.directed_edge_count()));
    for (int t = 1; t <= t_max; ++t) {
        traces[t] = p.trace();
        traces[t].trim();
        if (t < t_max) p = p * m;
    }
    return traces;
}

inline WalkCountTable table_from_polynomials(const std::vector<IPoly>& traces) {
    WalkCountTable table;
    table.t_max = static_cast<int>(traces.size()) - 1;
    table.provenance = "polynomial";
    table.counts.resize(traces.size());
    for (int t = 1; t <= table.t_max; ++t) {
        table.counts[t].assign(t + 1, BigInt(0));
        for (int gidx = 0; gidx <= t; ++gidx) table.counts[t][gidx] = traces[t].coeff(gidx);
    }
    return table;
}

// Exact tr Y(1)^t via integer powers of the Hashimoto matrix B - J.
inline std::vector<BigInt> trY1_powers(const RegularGraph& g, int t_max) {
    const int n = g.directed_edge_count();
    ExactMatrix<BigInt> y(n, n);
    for (int e = 0; e < n; ++e) {
        for (int f : g.out_edges()[g.terminus(e)]) y(e, f) += 1;
        y(e, RegularGraph::reversal(e)) -= 1;
    }
    std::vector<BigInt> tr(t_max + 1);
    tr[0] = n;
    ExactMatrix<BigInt> p = y;
    for (int t = 1; t <= t_max; ++t) {
        tr[t] = p.trace();
        if (t < t_max) p = p * y;
    }
    return tr;
}

// Closed form for the number of l-periodic walks with exactly one back-scatter:
//   N(l;1) = l(d-2) sum_k tr Y^(2k)(1) (d-1)^((l-2k-2)/2)        (l even)
//   N(l;1) = l(d-2) sum_k tr Y^(2k+1)(1) (d-1)^((l-2k-3)/2)      (l odd)
// with k running from 1 to l/2-1 (even) or floor(l/2)-1 (odd). On simple
// graphs the first even term vanishes because tr Y^2 = 0.
inline BigInt n_t1_closed_form(int d, int l, const std::vector<BigInt>& trY1) {
    if (l < 3) throw Error(errc::bad_input, "closed form needs l >= 3");
    BigInt acc(0);
    if (l % 2 == 0) {
        for (int k = 1; k <= l / 2 - 1; ++k) {
            BigInt pw = boost::multiprecision::pow(BigInt(d - 1), (l - 2 * k - 2) / 2);
            acc += trY1[2 * k] * pw;
        }
    } else {
        for (int k = 1; k <= l / 2 - 1; ++k) {
            BigInt pw = boost::multiprecision::pow(BigInt(d - 1), (l - 2 * k - 3) / 2);
            acc += trY1[2 * k + 1] * pw;
        }
    }
    return BigInt(l) * BigInt(d - 2) * acc;
}

// -- exact w-derivative bookkeeping at w = 1 -----------------------------------

// y_t(1) and y_t'(1) as elements of Q[sqrt(d-1)], from the exact polynomial
// traces: tr Y^t(1) is the u^0 coefficient and (tr Y^t)'(1) = -N(t;1) is minus
// the u^1 coefficient.
struct YAtOne {
    QuadExt value;       // y_t(1)
    QuadExt derivative;  // y_t'(1)
};

inline QuadExt half_power(long D, int t) {
    // (d-1)^(t/2) in Q[sqrt(D)]: integer part times sqrt(D) when t is odd.
    QuadExt r = QuadExt::rational(boost::multiprecision::pow(BigInt(D), t / 2).convert_to<Rational>(), D);
    if (t % 2) r = r * QuadExt::sqrtD(D);
    return r;
}

inline YAtOne y_at_one(int V, int d, int t, const IPoly& trace_poly) {
    const long D = d - 1;
    const Rational trY1 = trace_poly.coeff(0).convert_to<Rational>();
    const Rational dtrY1 = -trace_poly.coeff(1).convert_to<Rational>();  // (trY^t)'(1)
    const Rational dpow = boost::multiprecision::pow(BigInt(D), t).convert_to<Rational>();

    // numerator n(w) = trY^t(w) - (d-w)^t; n(1), n'(1)
    const Rational n1 = trY1 - dpow;
    const Rational dn1 = dtrY1 + Rational(t) * boost::multiprecision::pow(BigInt(D), t - 1).convert_to<Rational>();

    QuadExt denom = half_power(D, t) * Rational(V);
    YAtOne out;
    out.value = QuadExt::rational(n1, D) / denom;
    // d/dw [n (w(d-w))^(-t/2)] at w=1:
    //   n'(1) (d-1)^(-t/2) - (t/2) n(1) (d-2)/(d-1) (d-1)^(-t/2)
    Rational corr = dn1 - Rational(t) * Rational(d - 2) / Rational(2 * (d - 1)) * n1;
    out.derivative = QuadExt::rational(corr, D) / denom;
    return out;
}

// The explicit trivial-eigenvalue term of y_t: f_t(w) = (1/V)(w/(d-w))^(t/2).
inline YAtOne trivial_term_at_one(int V, int d, int t) {
    const long D = d - 1;
    QuadExt denom = half_power(D, t) * Rational(V);
    YAtOne out;
    out.value = QuadExt::rational(1, D) / denom;
    out.derivative = QuadExt::rational(Rational(t) * Rational(d) / Rational(2 * (d - 1)), D) / denom;
    return out;
}

struct ALValue {
    QuadExt raw;   // a_l from the finite-V y_t as they stand
    QuadExt bulk;  // a_l with the explicit 1/V trivial-eigenvalue term removed
};

// a_l = (d-2)[ (l-2)/4 y_{l-2} - (l+2)/4 y_{l+2} - y_l ]
//     + (d-1)[ y'_l - y'_{l-2}/2 - y'_{l+2}/2 ],   all at w = 1.
inline ALValue a_l_exact(const RegularGraph& g, int l, const std::vector<IPoly>& traces) {
    const int V = g.vertex_count();
    const int d = g.degree();
    const long D = d - 1;
    auto combine = [&](const YAtOne& ym2, const YAtOne& y0, const YAtOne& yp2) {
        QuadExt first = (ym2.value * Rational(l - 2) - yp2.value * Rational(l + 2)) *
                            Rational(1, 4) -
                        y0.value;
        QuadExt second = y0.derivative - (ym2.derivative + yp2.derivative) * Rational(1, 2);
        return first * Rational(d - 2) + second * Rational(d - 1);
    };
    YAtOne ym2 = y_at_one(V, d, l - 2, traces[l - 2]);
    YAtOne y0 = y_at_one(V, d, l, traces[l]);
    YAtOne yp2 = y_at_one(V, d, l + 2, traces[l + 2]);
    ALValue out;
    out.raw = combine(ym2, y0, yp2);

    auto strip = [&](YAtOne y, int t) {
        YAtOne f = trivial_term_at_one(V, d, t);
        y.value = y.value - f.value;
        y.derivative = y.derivative - f.derivative;
        return y;
    };
    out.bulk = combine(strip(ym2, l - 2), strip(y0, l), strip(yp2, l + 2));
    (void)D;
    return out;
}

// Per-l report of the a_l evaluation: the raw finite-V value and the value
// with the explicit 1/V trivial-eigenvalue term removed. Both turn out to
// vanish identically; the report keeps them separate so that is checkable.
struct ALReport {
    int l_max = 0;
    std::vector<ALValue> values;  // index l, entries for l = 3..l_max
    bool all_bulk_zero = true;
    bool all_raw_zero = true;
};

inline ALReport verify_a_l_vanishing(const RegularGraph& g, int l_max) {
    std::vector<IPoly> traces = trY_polynomial(g, l_max + 2);
    ALReport rep;
    rep.l_max = l_max;
    rep.values.resize(l_max + 1);
    for (int l = 3; l <= l_max; ++l) {
        rep.values[l] = a_l_exact(g, l, traces);
        rep.all_bulk_zero = rep.all_bulk_zero && rep.values[l].bulk.is_zero();
        rep.all_raw_zero = rep.all_raw_zero && rep.values[l].raw.is_zero();
    }
    return rep;
}

// p_l and q_l of the tail recursion, in Q[sqrt(d-1)].
inline QuadExt p_value(int d, int l, const std::vector<IPoly>& traces) {
    const long D = d - 1;
    Rational dtr = -traces[l].coeff(1).convert_to<Rational>();
    return QuadExt::rational(dtr, D) / half_power(D, l - 2);
}

inline QuadExt q_value(int d, int l, const std::vector<IPoly>& traces) {
    const long D = d - 1;
    // tr Y^m(1) = 0 for m < 2 on simple graphs, so those terms drop before
    // their (fractional) power of d-1 is ever formed.
    auto term = [&](int m, long coeff) -> QuadExt {
        if (m < 2) return QuadExt::rational(0, D);
        Rational tr = traces[m].coeff(0).convert_to<Rational>();
        return QuadExt::rational(Rational(coeff) * tr, D) / half_power(D, m);
    };
    return (term(l - 2, l - 2) - term(l, l + 2)) * Rational(d - 2);
}

// Check p_{l+2} - p_l = sum of q over the parity class, exactly.
inline bool pq_recursion_holds(const RegularGraph& g, int l, const std::vector<IPoly>& traces) {
    const int d = g.degree();
    QuadExt lhs = p_value(d, l + 2, traces) - p_value(d, l, traces);
    QuadExt rhs = QuadExt::rational(0, d - 1);
    if (l % 2 == 0) {
        for (int k = 1; k <= l / 2; ++k) rhs = rhs + q_value(d, 2 * k, traces);
    } else {
        for (int k = 0; k <= l / 2; ++k) rhs = rhs + q_value(d, 2 * k + 1, traces);
    }
    return (lhs - rhs).is_zero();
}

}  // namespace regraph

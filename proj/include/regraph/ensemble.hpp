#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "regraph/errors.hpp"
#include "regraph/graph.hpp"

namespace regraph {

enum class Decoration { none, magnetic, weighted };

struct EnsembleSpec {
    int V = 0;
    int d = 0;
    int sample_count = 1;
    std::uint64_t seed = 0;
    Decoration decoration = Decoration::none;
    bool reject_bipartite = true;
    bool reject_disconnected = true;
    long restart_budget = 2'000'000;

    void validate() const {
        if (d < 3) throw Error(errc::bad_input, "ensemble needs d >= 3");
        if (V <= d) throw Error(errc::bad_input, "ensemble needs V > d");
        if ((static_cast<long long>(V) * d) % 2 != 0)
            throw Error(errc::odd_product, "d*V must be even");
        if (sample_count < 1) throw Error(errc::bad_input, "sample_count must be >= 1");
    }
};

// splitmix64; used to derive independent per-sample streams from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix_seed(seed, index));
}

// One draw of the configuration (pairing) model: shuffle the dV stubs and pair
// them consecutively. A uniform permutation induces a uniform perfect matching,
// and conditioning on simplicity (full restart on any loop or parallel edge)
// makes the sample exactly uniform over simple d-regular graphs.
inline RegularGraph sample_regular(const EnsembleSpec& spec, std::mt19937_64& rng) {
    spec.validate();
    const int V = spec.V, d = spec.d;
    std::vector<int> stubs(static_cast<std::size_t>(V) * d);
    for (int v = 0; v < V; ++v)
        for (int i = 0; i < d; ++i) stubs[static_cast<std::size_t>(v) * d + i] = v;

    std::vector<RegularGraph::Edge> edges(stubs.size() / 2);
    std::set<RegularGraph::Edge> seen;
    for (long attempt = 0; attempt < spec.restart_budget; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        bool ok = true;
        seen.clear();
        for (std::size_t k = 0; k < edges.size(); ++k) {
            int a = stubs[2 * k], b = stubs[2 * k + 1];
            if (a == b) {
                ok = false;
                break;
            }
            RegularGraph::Edge e{std::min(a, b), std::max(a, b)};
            if (!seen.insert(e).second) {
                ok = false;
                break;
            }
            edges[k] = e;
        }
        if (!ok) continue;
        RegularGraph g = RegularGraph::build(V, edges, GraphMode::simple);
        if (spec.reject_disconnected && !g.is_connected()) continue;
        if (spec.reject_bipartite && g.is_bipartite()) continue;
        return g;
    }
    throw Error(errc::rejection_budget_exceeded,
                "no admissible pairing after " + std::to_string(spec.restart_budget) +
                    " restarts (V=" + std::to_string(V) + ", d=" + std::to_string(d) + ")");
}

inline RegularGraph sample_regular(const EnsembleSpec& spec, std::uint64_t sample_index = 0) {
    auto rng = sample_rng(spec.seed, sample_index);
    return sample_regular(spec, rng);
}

// Regular multigraph from the raw pairing model (loops and parallels kept).
inline RegularGraph sample_regular_multigraph(int V, int d, std::mt19937_64& rng) {
    std::vector<int> stubs(static_cast<std::size_t>(V) * d);
    for (int v = 0; v < V; ++v)
        for (int i = 0; i < d; ++i) stubs[static_cast<std::size_t>(v) * d + i] = v;
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<RegularGraph::Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t k = 0; 2 * k + 1 < stubs.size(); ++k) {
        int a = stubs[2 * k], b = stubs[2 * k + 1];
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    return RegularGraph::build(V, edges, GraphMode::multigraph);
}

// Phases independently uniform in [0, 2pi), one per undirected edge.
inline MagneticDecoration decorate_magnetic(const RegularGraph& g, std::mt19937_64& rng,
                                            bool all_zero = false) {
    MagneticDecoration m;
    m.edge_count = g.edge_count();
    m.phase.resize(m.edge_count, 0.0);
    if (!all_zero) {
        std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
        for (double& p : m.phase) p = u(rng);
    }
    return m;
}

inline MagneticDecoration decorate_magnetic(const RegularGraph& g, std::uint64_t seed,
                                            bool all_zero = false) {
    auto rng = sample_rng(seed, 0x6d61676eULL);
    return decorate_magnetic(g, rng, all_zero);
}

// Weights independently uniform in [-1, 1], one per undirected edge.
inline WeightDecoration decorate_weighted(const RegularGraph& g, std::mt19937_64& rng,
                                          bool all_one = false) {
    WeightDecoration w;
    w.edge_count = g.edge_count();
    w.weight.resize(w.edge_count, 1.0);
    if (!all_one) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (double& x : w.weight) x = u(rng);
    }
    return w;
}

inline WeightDecoration decorate_weighted(const RegularGraph& g, std::uint64_t seed,
                                          bool all_one = false) {
    auto rng = sample_rng(seed, 0x77656967ULL);
    return decorate_weighted(g, rng, all_one);
}

// Pairwise (cascade) summation over [lo, hi); keeps the reduction order fixed
// no matter how the samples were produced.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

struct EnsembleStats {
    std::vector<double> mean;
    std::vector<double> stderr_;
};

// Mean and standard error of a vector observable over sample_count independent
// draws. Each sample owns the stream derived from (seed, index), so results are
// bit-identical for any thread count; the reduction is an ordered pairwise sum.
inline EnsembleStats ensemble_average(
    const EnsembleSpec& spec,
    const std::function<std::vector<double>(const RegularGraph&, std::mt19937_64&)>& observable,
    int threads = 1) {
    spec.validate();
    const int n = spec.sample_count;
    std::vector<std::vector<double>> values(n);

    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&](int begin, int end) {
        try {
            for (int i = begin; i < end; ++i) {
                auto rng = sample_rng(spec.seed, static_cast<std::uint64_t>(i));
                RegularGraph g = sample_regular(spec, rng);
                values[i] = observable(g, rng);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    const std::size_t dim = values[0].size();
    for (const auto& v : values)
        if (v.size() != dim)
            throw Error(errc::bad_input, "observable must return fixed-length vectors");

    EnsembleStats stats;
    stats.mean.resize(dim);
    stats.stderr_.resize(dim);
    std::vector<double> column(n), sq(n);
    for (std::size_t j = 0; j < dim; ++j) {
        for (int i = 0; i < n; ++i) column[i] = values[i][j];
        const double mean = pairwise_sum(column, 0, n) / n;
        for (int i = 0; i < n; ++i) sq[i] = (column[i] - mean) * (column[i] - mean);
        const double var = n > 1 ? pairwise_sum(sq, 0, n) / (n - 1) : 0.0;
        stats.mean[j] = mean;
        stats.stderr_[j] = n > 1 ? std::sqrt(var / n) : 0.0;
    }
    return stats;
}

}  // namespace regraph

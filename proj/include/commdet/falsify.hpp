#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "commdet/graph.hpp"
#include "commdet/parallel.hpp"
#include "commdet/pipeline.hpp"

namespace commdet {

/// Seeded G(n, p): every one of the n(n-1)/2 edges included independently
/// with probability p, realized by geometric gap sampling over the pair
/// sequence so sparse graphs cost O(E). Cleaned like any loaded graph, so
/// isolated vertices of the draw are removed.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2 || p <= 0.0 || p >= 1.0)
        throw std::invalid_argument("generate_er requires n >= 2 and 0 < p < 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double denom = std::log(1.0 - p);
    std::vector<std::pair<std::string, std::string>> pairs;
    // geometric gap walk over the pairs (w, v), w < v, v ascending
    std::int64_t v = 1;
    std::int64_t w = -1;
    const std::int64_t nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        const double r = unit(rng);
        w += 1 + static_cast<std::int64_t>(std::floor(std::log(1.0 - r) / denom));
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) pairs.emplace_back(std::to_string(w), std::to_string(v));
    }
    if (pairs.empty()) throw empty_graph_error();
    return Graph::from_label_pairs(std::move(pairs));
}

struct NullParams {
    std::size_t n;
    double p;
};

/// ER parameters matched to a graph: same node count, p chosen so the
/// expected edge count equals the real one.
inline NullParams match_null(const Graph& g) {
    const double n = static_cast<double>(g.node_count());
    return {g.node_count(), 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0))};
}

enum class Verdict { Valid, Suspect, NotApplicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Valid: return "valid";
        case Verdict::Suspect: return "suspect";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

struct FalsifiabilityVerdict {
    Verdict verdict = Verdict::NotApplicable;
    std::string reason;
    double real_hub_fraction = 0.0;
    double real_phi = 0.0;
    bool real_phi_applicable = false;
    std::vector<double> null_hub_fractions;
    std::vector<double> null_phis;  // NaN where inapplicable
    double null_hub_fraction_median = 0.0;
    double null_phi_median = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> replicate_seeds;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Self-falsifiability benchmark: run the full detection on the input and on
/// size-matched ER replicates; the detection is suspect when the input's
/// hub fraction does not stay below the null median or its phi does not stay
/// above it. Input graph is never modified.
inline FalsifiabilityVerdict falsifiability_check(const Graph& g, const PipelineResult& real,
                                                  std::size_t replicates, std::uint64_t seed,
                                                  unsigned workers = 1) {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    FalsifiabilityVerdict out;
    out.seed = seed;
    out.real_hub_fraction =
        static_cast<double>(real.roles.hubs.size()) / static_cast<double>(g.node_count());
    out.real_phi = real.hierarchy.phi.value;
    out.real_phi_applicable = real.hierarchy.phi.applicable;

    if (real.roles.hubs.empty()) {
        out.verdict = Verdict::NotApplicable;
        out.reason = "input graph yields no end-communities";
        return out;
    }

    const NullParams np = match_null(g);
    out.replicate_seeds.resize(replicates);
    for (std::size_t k = 0; k < replicates; ++k)
        out.replicate_seeds[k] = detail::mix_seed(seed, k);
    out.null_hub_fractions.assign(replicates, std::numeric_limits<double>::quiet_NaN());
    out.null_phis.assign(replicates, std::numeric_limits<double>::quiet_NaN());

    parallel_for(replicates, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            Graph null_graph = generate_er(np.n, np.p, out.replicate_seeds[k]);
            PipelineResult r = run_steps(null_graph, PipelineOptions{});
            out.null_hub_fractions[k] = static_cast<double>(r.roles.hubs.size()) /
                                        static_cast<double>(null_graph.node_count());
            if (r.hierarchy.phi.applicable) out.null_phis[k] = r.hierarchy.phi.value;
        }
    });

    std::vector<double> hubs_ok, phis_ok;
    for (double v : out.null_hub_fractions)
        if (!std::isnan(v)) hubs_ok.push_back(v);
    for (double v : out.null_phis)
        if (!std::isnan(v)) phis_ok.push_back(v);

    if (!out.real_phi_applicable || phis_ok.empty() || hubs_ok.empty()) {
        out.verdict = Verdict::NotApplicable;
        out.reason = !out.real_phi_applicable ? "phi undefined on the input (|S| <= 2)"
                                              : "phi undefined on every null replicate";
        return out;
    }
    out.null_hub_fraction_median = detail::median(hubs_ok);
    out.null_phi_median = detail::median(phis_ok);
    if (out.real_hub_fraction >= out.null_hub_fraction_median ||
        out.real_phi <= out.null_phi_median) {
        out.verdict = Verdict::Suspect;
        out.reason = out.real_hub_fraction >= out.null_hub_fraction_median
                         ? "hub fraction not below the null median"
                         : "phi not above the null median";
    } else {
        out.verdict = Verdict::Valid;
        out.reason = "hub fraction below and phi above the null medians";
    }
    return out;
}

}  // namespace commdet

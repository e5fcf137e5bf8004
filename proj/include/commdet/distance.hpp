#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "commdet/graph.hpp"
#include "commdet/parallel.hpp"

namespace commdet {

/// Sentinel for unreachable pairs: the largest representable distance. It is
/// never a merge candidate because merge levels only run up to the largest
/// finite entry.
inline constexpr std::int32_t kDistInf = std::numeric_limits<std::int32_t>::max();

/// Square symmetric hop-distance matrix over community handles.
struct DistanceMatrix {
    std::vector<std::string> labels;
    std::vector<std::int32_t> d;  // row-major n x n

    std::size_t size() const { return labels.size(); }
    std::int32_t at(std::size_t i, std::size_t j) const { return d[i * labels.size() + j]; }
    std::int32_t& at(std::size_t i, std::size_t j) { return d[i * labels.size() + j]; }

    /// Largest finite off-diagonal entry (0 when none).
    std::int32_t eps_max() const {
        std::int32_t m = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (at(i, j) != kDistInf && at(i, j) > m) m = at(i, j);
        return m;
    }
};

/// Unweighted shortest-path distances between all hub pairs. BFS runs from
/// every hub; sources are batched 64 at a time on bit masks so large hub sets
/// stay cheap. Each source still gets its own exact BFS distances.
inline DistanceMatrix hub_distances(const Graph& g, std::span<const NodeId> hubs,
                                    unsigned workers = 1) {
    const std::size_t n = g.node_count();
    const std::size_t k = hubs.size();
    DistanceMatrix r;
    r.labels.reserve(k);
    for (NodeId h : hubs) r.labels.push_back(g.label(h));
    r.d.assign(k * k, kDistInf);
    for (std::size_t i = 0; i < k; ++i) r.at(i, i) = 0;

    std::vector<std::uint32_t> hub_index(n, Graph::kNoNode);
    for (std::size_t i = 0; i < k; ++i) hub_index[hubs[i]] = static_cast<std::uint32_t>(i);

    const std::size_t batches = (k + 63) / 64;
    const std::uint64_t full = k >= 64 ? ~0ull : (1ull << k) - 1;
    parallel_for(batches, workers, [&](std::size_t b0, std::size_t b1) {
        std::vector<std::uint64_t> seen(n), next(n);
        std::vector<NodeId> frontier, touched;
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t lo = b * 64;
            const std::size_t hi = std::min(lo + 64, k);
            const std::uint64_t batch_full = hi - lo >= 64 ? full : (1ull << (hi - lo)) - 1;
            std::fill(seen.begin(), seen.end(), 0);
            frontier.clear();
            for (std::size_t s = lo; s < hi; ++s) {
                seen[hubs[s]] |= 1ull << (s - lo);
                frontier.push_back(hubs[s]);
            }
            // done once every hub row of this batch is fully resolved
            std::size_t unresolved = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (seen[hubs[i]] != batch_full) ++unresolved;
            std::int32_t depth = 0;
            while (!frontier.empty() && unresolved > 0) {
                ++depth;
                touched.clear();
                for (NodeId u : frontier) {
                    const std::uint64_t mask = seen[u];
                    for (NodeId v : g.neighbors(u)) {
                        if (next[v] == 0) touched.push_back(v);
                        next[v] |= mask;
                    }
                }
                frontier.clear();
                for (NodeId v : touched) {
                    std::uint64_t fresh = next[v] & ~seen[v];
                    next[v] = 0;
                    if (!fresh) continue;
                    const bool was_full = seen[v] == batch_full;
                    seen[v] |= fresh;
                    frontier.push_back(v);
                    if (hub_index[v] != Graph::kNoNode) {
                        const std::size_t col = hub_index[v];
                        if (!was_full && seen[v] == batch_full) --unresolved;
                        while (fresh) {
                            const unsigned bit = static_cast<unsigned>(__builtin_ctzll(fresh));
                            fresh &= fresh - 1;
                            r.at(lo + bit, col) = depth;
                        }
                    }
                }
            }
        }
    });
    return r;
}

}  // namespace commdet

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "commdet/centrality.hpp"
#include "commdet/graph.hpp"
#include "commdet/roles.hpp"

namespace commdet {

struct Infection {
    NodeId node;
    std::uint32_t time;
    bool operator==(const Infection&) const = default;
};

struct LabelHit {
    std::uint32_t community;  // index into RoleAssignment::hubs
    std::uint32_t time;
    bool operator==(const LabelHit&) const = default;
};

/// Outcome of the synchronized downhill label propagation. Community k is the
/// end-community seeded by hub roles.hubs[k]; communities[k] holds (node, t)
/// join tuples and histories[u] the mirrored (community, t) infection tuples.
struct PropagationState {
    std::vector<std::vector<Infection>> communities;  // X
    std::vector<std::vector<LabelHit>> histories;     // H
    std::uint32_t t_fin = 0;
    std::uint32_t t_max = 0;
    bool truncated = false;
    std::vector<std::uint64_t> step_infections;  // per-step counts, size t_fin
    std::vector<double> step_seconds;            // wall clock per step, size t_fin

    std::size_t community_count() const { return communities.size(); }
    std::uint64_t total_memberships() const {
        std::uint64_t s = 0;
        for (const auto& x : communities) s += x.size();
        return s;
    }
};

struct OverlapMetrics {
    double m_h = 0.0;  // average |h_i| over all nodes
    double m_x = 0.0;  // average |x_s| over all communities
};

class degenerate_graph_error : public std::runtime_error {
public:
    explicit degenerate_graph_error(const std::string& what) : std::runtime_error(what) {}
};

/// Synchronized propagation from all hubs: at step t every node that joined
/// community s at t-1 passes the label to strictly lower-centrality neighbors
/// that do not carry s yet. Stops on a full step with no infection or at
/// t_max (t_max = N when 0). Infections at step t read only step t-1
/// membership, so the result is independent of iteration order.
inline PropagationState propagate(const Graph& g, const CentralityVector& c,
                                  const RoleAssignment& roles, std::uint32_t t_max = 0) {
    using clock = std::chrono::steady_clock;
    const std::size_t k = roles.hubs.size();
    PropagationState st;
    st.t_max = t_max == 0 ? static_cast<std::uint32_t>(g.node_count()) : t_max;
    st.communities.resize(k);
    st.histories.resize(g.node_count());

    // frontier of community s = entries of communities[s] with time t-1;
    // they are contiguous at the tail, tracked by frontier_begin.
    std::vector<std::size_t> frontier_begin(k, 0);
    for (std::uint32_t s = 0; s < k; ++s) {
        st.communities[s].push_back({roles.hubs[s], 0});
        st.histories[roles.hubs[s]].push_back({s, 0});
    }

    const double eps = c.equality_tolerance();
    auto carries = [&](NodeId j, std::uint32_t s) {
        for (const LabelHit& h : st.histories[j])
            if (h.community == s) return true;
        return false;
    };

    std::uint32_t t = 0;
    while (t < st.t_max) {
        ++t;
        auto tick = clock::now();
        std::uint64_t infections = 0;
        for (std::uint32_t s = 0; s < k; ++s) {
            auto& x = st.communities[s];
            const std::size_t begin = frontier_begin[s];
            const std::size_t end = x.size();
            frontier_begin[s] = end;
            for (std::size_t idx = begin; idx < end; ++idx) {
                const NodeId i = x[idx].node;
                const double ci = c[i];
                for (NodeId j : g.neighbors(i)) {
                    if (ci - c[j] <= eps) continue;  // only strictly downhill
                    if (carries(j, s)) continue;
                    x.push_back({j, t});
                    st.histories[j].push_back({s, t});
                    ++infections;
                }
            }
        }
        if (infections == 0) break;
        st.t_fin = t;
        st.step_infections.push_back(infections);
        st.step_seconds.push_back(std::chrono::duration<double>(clock::now() - tick).count());
        if (t == st.t_max) st.truncated = true;  // convergence not observed
    }
    return st;
}

/// Eq-style overlap metrics; the tuple-count identity m_h*N == m_x*|S| holds
/// exactly because X and H mirror each other.
inline OverlapMetrics overlap_metrics(const PropagationState& st, const Graph& g) {
    if (st.communities.empty())
        throw degenerate_graph_error("no end-communities: hub set is empty");
    std::uint64_t sum_x = st.total_memberships();
    std::uint64_t sum_h = 0;
    for (const auto& h : st.histories) sum_h += h.size();
    if (sum_h != sum_x) throw std::logic_error("membership tuples X and H diverged");
    return {static_cast<double>(sum_h) / static_cast<double>(g.node_count()),
            static_cast<double>(sum_x) / static_cast<double>(st.communities.size())};
}

/// A node's memberships ordered strongest first (earlier infection = stronger),
/// ties broken by community index. Empty for isolated nodes.
inline std::vector<LabelHit> membership_strength(const PropagationState& st, NodeId node) {
    std::vector<LabelHit> out = st.histories[node];
    std::sort(out.begin(), out.end(), [](const LabelHit& a, const LabelHit& b) {
        return a.time != b.time ? a.time < b.time : a.community < b.community;
    });
    return out;
}

/// Nodes holding more than one community label. Step-1 boundary counts and
/// this multi-membership count can legitimately differ.
inline std::size_t multi_membership_count(const PropagationState& st) {
    std::size_t n = 0;
    for (const auto& h : st.histories)
        if (h.size() > 1) ++n;
    return n;
}

}  // namespace commdet

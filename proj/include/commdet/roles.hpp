#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <vector>

#include "commdet/centrality.hpp"
#include "commdet/graph.hpp"

namespace commdet {

enum class Role : std::uint8_t { Hub, Inner, Boundary, Leaf, Isolated };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::Hub: return "hub";
        case Role::Inner: return "inner";
        case Role::Boundary: return "boundary";
        case Role::Leaf: return "leaf";
        case Role::Isolated: return "isolated";
    }
    return "?";
}

struct RoleAssignment {
    std::vector<Role> roles;        // one per node
    std::vector<NodeId> hubs;       // ascending node ids; hubs[k] seeds community k
    std::array<std::size_t, 5> counts{};  // indexed by Role

    std::size_t count(Role r) const { return counts[static_cast<std::size_t>(r)]; }
};

/// Classify every node from its centrality relative to its neighbors:
/// hubs are local peaks strictly above at least one neighbor, isolated nodes
/// tie all neighbors, leaves have degree 1, boundaries are strict local
/// troughs with degree >= 2, everything else is inner.
inline RoleAssignment classify_roles(const Graph& g, const CentralityVector& c) {
    const double eps = c.equality_tolerance();
    RoleAssignment out;
    out.roles.resize(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double cu = c[u];
        bool ge_all = true, gt_some = false, eq_all = true, lt_all = true;
        for (NodeId v : g.neighbors(u)) {
            const double cv = c[v];
            const bool eq = std::fabs(cu - cv) <= eps;
            if (!eq && cu < cv) ge_all = false;
            if (!eq && cu > cv) gt_some = true;
            if (!eq) eq_all = false;
            if (eq || cu > cv) lt_all = false;
        }
        Role r;
        if (ge_all && gt_some)
            r = Role::Hub;
        else if (eq_all)
            r = Role::Isolated;
        else if (g.degree(u) == 1)
            r = Role::Leaf;
        else if (lt_all)
            r = Role::Boundary;
        else
            r = Role::Inner;
        out.roles[u] = r;
        ++out.counts[static_cast<std::size_t>(r)];
        if (r == Role::Hub) out.hubs.push_back(u);
    }
    return out;
}

inline void write_roles_csv(const Graph& g, const RoleAssignment& roles, std::ostream& out) {
    out << "node_id,role\n";
    for (NodeId u = 0; u < g.node_count(); ++u)
        out << g.label(u) << ',' << to_string(roles.roles[u]) << '\n';
}

}  // namespace commdet

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace commdet {

using NodeId = std::uint32_t;

/// Parse failure while reading an edge list; carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Input graph is empty after cleaning (self-loops dropped, isolated nodes removed).
class empty_graph_error : public std::runtime_error {
public:
    empty_graph_error() : std::runtime_error("graph is empty after cleaning") {}
};

struct LoadOptions {
    bool numeric_ids = false;  // reject non-numeric tokens when set
};

struct CleaningStats {
    std::size_t self_loops = 0;
    std::size_t duplicate_edges = 0;
    std::size_t zero_degree_nodes = 0;
};

/// Immutable undirected simple graph. Nodes are dense indices 0..N-1 with the
/// original external ids kept as labels. Self-loops and duplicate edges are
/// dropped at construction and zero-degree nodes are removed.
class Graph {
public:
    Graph() = default;

    /// Build from (label, label) pairs. Cleaning rules applied; labels are
    /// assigned dense ids by first appearance in the (cleaned) input order.
    static Graph from_label_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
        Graph g;
        CleaningStats stats;
        std::unordered_map<std::string, NodeId> ids;
        std::vector<std::string> labels;
        std::vector<std::pair<NodeId, NodeId>> edges;
        edges.reserve(pairs.size());
        auto intern = [&](std::string& s) {
            auto it = ids.find(s);
            if (it != ids.end()) return it->second;
            NodeId id = static_cast<NodeId>(labels.size());
            ids.emplace(s, id);
            labels.push_back(std::move(s));
            return id;
        };
        for (auto& [a, b] : pairs) {
            if (a == b) {
                ++stats.self_loops;
                intern(a);  // may end up degree-0 and get removed below
                continue;
            }
            NodeId u = intern(a);
            NodeId v = intern(b);
            if (u > v) std::swap(u, v);
            edges.emplace_back(u, v);
        }
        std::sort(edges.begin(), edges.end());
        auto last = std::unique(edges.begin(), edges.end());
        stats.duplicate_edges = static_cast<std::size_t>(edges.end() - last);
        edges.erase(last, edges.end());

        // drop nodes that lost all incident edges (self-loop-only nodes)
        std::vector<std::uint32_t> deg(labels.size(), 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        std::vector<NodeId> remap(labels.size(), kNoNode);
        NodeId next = 0;
        for (NodeId u = 0; u < labels.size(); ++u) {
            if (deg[u] > 0)
                remap[u] = next++;
            else
                ++stats.zero_degree_nodes;
        }
        if (next == 0) throw empty_graph_error();

        g.labels_.resize(next);
        for (NodeId u = 0; u < labels.size(); ++u)
            if (remap[u] != kNoNode) g.labels_[remap[u]] = std::move(labels[u]);

        std::vector<std::uint32_t> newdeg(next, 0);
        for (auto& [u, v] : edges) {
            u = remap[u];
            v = remap[v];
            ++newdeg[u];
            ++newdeg[v];
        }
        g.offsets_.assign(next + 1, 0);
        for (NodeId u = 0; u < next; ++u) g.offsets_[u + 1] = g.offsets_[u] + newdeg[u];
        g.adjacency_.resize(g.offsets_[next]);
        std::vector<std::uint32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        for (auto [u, v] : edges) {
            g.adjacency_[fill[u]++] = v;
            g.adjacency_[fill[v]++] = u;
        }
        for (NodeId u = 0; u < next; ++u)
            std::sort(g.adjacency_.begin() + g.offsets_[u], g.adjacency_.begin() + g.offsets_[u + 1]);
        g.edge_count_ = edges.size();
        g.cleaning_ = stats;
        g.index_labels();
        return g;
    }

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    std::uint32_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

    const std::string& label(NodeId u) const { return labels_[u]; }
    std::span<const std::string> labels() const { return labels_; }

    std::optional<NodeId> find(std::string_view label) const {
        auto it = label_index_.find(std::string(label));
        if (it == label_index_.end()) return std::nullopt;
        return it->second;
    }

    const CleaningStats& cleaning() const { return cleaning_; }

    /// Canonical edge-list serialization: one "label label" line per edge,
    /// ordered by internal indices. load(write(g)) reproduces g.
    void write_edge_list(std::ostream& out) const {
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out << labels_[u] << ' ' << labels_[v] << '\n';
    }

    static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

private:
    void index_labels() {
        label_index_.reserve(labels_.size());
        for (NodeId u = 0; u < labels_.size(); ++u) label_index_.emplace(labels_[u], u);
    }

    std::vector<std::uint32_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> label_index_;
    std::size_t edge_count_ = 0;
    CleaningStats cleaning_;
};

/// Read a whitespace-separated edge list ("u v" per line, '#' comments).
inline Graph load_edge_list(std::istream& in, const LoadOptions& opts = {}) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    auto numeric = [](const std::string& tok) {
        if (tok.empty()) return false;
        return std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') continue;
        std::string u, v, extra;
        std::size_t i = begin;
        auto take = [&](std::string& out) {
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) out += line[i++];
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        };
        take(u);
        take(v);
        take(extra);
        if (u.empty() || v.empty() || !extra.empty())
            throw parse_error(lineno, "expected exactly two node ids, got \"" + line + "\"");
        if (opts.numeric_ids && (!numeric(u) || !numeric(v)))
            throw parse_error(lineno, "non-numeric node id in \"" + line + "\"");
        pairs.emplace_back(std::move(u), std::move(v));
    }
    return Graph::from_label_pairs(std::move(pairs));
}

}  // namespace commdet

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "commdet/distance.hpp"
#include "commdet/graph.hpp"
#include "commdet/propagation.hpp"

namespace commdet {

/// |A n B| / |A u B| over node sets. Both sets empty is undefined.
inline double jaccard(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.empty() && b.empty()) throw std::invalid_argument("jaccard of two empty sets");
    std::size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else
            ++inter, ++i, ++j;
    }
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

/// Square symmetric Jaccard matrix aligned with a DistanceMatrix.
struct JaccardMatrix {
    std::vector<std::string> labels;
    std::vector<double> j;  // row-major n x n, unit diagonal

    std::size_t size() const { return labels.size(); }
    double at(std::size_t p, std::size_t q) const { return j[p * labels.size() + q]; }
    double& at(std::size_t p, std::size_t q) { return j[p * labels.size() + q]; }
};

inline JaccardMatrix jaccard_matrix(const std::vector<std::vector<NodeId>>& sets,
                                    std::vector<std::string> labels) {
    JaccardMatrix m;
    m.labels = std::move(labels);
    const std::size_t n = sets.size();
    m.j.assign(n * n, 1.0);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) m.at(p, q) = m.at(q, p) = jaccard(sets[p], sets[q]);
    return m;
}

/// The J-D consistency condition for merging (p, q) at distance r_pq: every
/// other community z that is not co-merging (r_pz > r_pq or r_qz > r_pq) must
/// overlap both p and q less than they overlap each other.
inline bool jd_consistent(std::size_t p, std::size_t q, const DistanceMatrix& r,
                          const JaccardMatrix& jm) {
    const double jpq = jm.at(p, q);
    const std::int32_t rpq = r.at(p, q);
    for (std::size_t z = 0; z < r.size(); ++z) {
        if (z == p || z == q) continue;
        if (r.at(p, z) > rpq || r.at(q, z) > rpq)
            if (!(jpq > jm.at(p, z) && jpq > jm.at(q, z))) return false;
    }
    return true;
}

struct MergeEvent {
    std::int32_t eps;
    std::uint32_t left;    // community id: 0..S-1 end-communities, then S+k for merge k
    std::uint32_t right;
    std::uint32_t merged;
    bool jd_consistent;
};

struct LevelStats {
    std::int32_t eps;
    std::uint32_t size_after;  // |R_eps|
    std::uint32_t delta;       // |R_{eps-1}| - |R_eps|
    std::uint32_t merges;
    std::uint32_t consistent;
    std::optional<double> phi_eps;  // consistent/merges, unset when no merges
};

struct PhiValue {
    double value = 1.0;      // reported 1 by convention when not applicable
    bool applicable = false;  // Eq. holds only for |S| > 2
    std::uint32_t consistent_events = 0;
    std::uint32_t total_events = 0;
};

class empty_hierarchy_error : public std::runtime_error {
public:
    empty_hierarchy_error() : std::runtime_error("cannot build hierarchy: no end-communities") {}
};

/// Community hierarchy: ordered merge events over end-communities plus the
/// per-level curves. Node sets of intermediate communities are reconstructed
/// on demand from the merge tree.
struct CommunityHierarchy {
    std::vector<std::string> end_labels;           // hub labels, community ids 0..S-1
    std::vector<std::vector<NodeId>> end_sets;     // sorted node sets of end-communities
    std::vector<MergeEvent> events;
    std::vector<LevelStats> levels;                // index 0 = level 0 snapshot
    std::int32_t eps_max = 0;
    bool truncated_by_disconnection = false;
    std::uint32_t surviving = 0;
    PhiValue phi;

    /// Handle of a community id: hub label for end-communities, "left+right"
    /// concatenation for merged ones.
    std::string handle(std::uint32_t id) const {
        if (id < end_labels.size()) return end_labels[id];
        const MergeEvent& e = events[id - end_labels.size()];
        return handle(e.left) + "+" + handle(e.right);
    }

    /// Surviving community ids after all merges with eps <= level, ascending.
    std::vector<std::uint32_t> ids_at(std::int32_t level) const {
        std::vector<bool> dead(end_labels.size() + events.size(), false);
        for (const MergeEvent& e : events) {
            if (e.eps > level) break;
            dead[e.left] = dead[e.right] = true;
        }
        std::vector<std::uint32_t> out;
        for (std::uint32_t id = 0; id < dead.size(); ++id) {
            bool exists = id < end_labels.size() || events[id - end_labels.size()].eps <= level;
            if (exists && !dead[id]) out.push_back(id);
        }
        return out;
    }

    /// Sorted node set of a community id (union of end-communities beneath it).
    std::vector<NodeId> node_set(std::uint32_t id) const {
        if (id < end_labels.size()) return end_sets[id];
        const MergeEvent& e = events[id - end_labels.size()];
        std::vector<NodeId> l = node_set(e.left), r = node_set(e.right), out;
        out.reserve(l.size() + r.size());
        std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
        return out;
    }

    /// HR_level: node sets of the communities present at a hierarchy level.
    std::vector<std::vector<NodeId>> communities_at(std::int32_t level) const {
        std::vector<std::vector<NodeId>> out;
        for (std::uint32_t id : ids_at(level)) out.push_back(node_set(id));
        return out;
    }
};

namespace detail {

struct PairKey {
    std::uint64_t lo, hi;  // order keys, lo < hi
    std::uint32_t slot_a, slot_b;
    bool operator>(const PairKey& o) const { return lo != o.lo ? lo > o.lo : hi > o.hi; }
};

}  // namespace detail

/// Algorithm: for eps = 1..eps_max repeatedly merge the row-major-first pair
/// at distance eps (rescanning from the top after every merge), with
/// max-linkage distance updates and a J-D consistency check against the
/// pre-merge state. The scan order is realized with a priority queue over
/// label order keys, which reproduces the rescan-from-top order exactly.
inline CommunityHierarchy build_hierarchy(const PropagationState& state,
                                          const DistanceMatrix& r0) {
    const std::size_t S = state.community_count();
    if (S == 0) throw empty_hierarchy_error();
    if (r0.size() != S) throw std::invalid_argument("distance matrix does not match community count");

    CommunityHierarchy h;
    h.end_labels = r0.labels;
    h.end_sets.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        auto& set = h.end_sets[s];
        set.reserve(state.communities[s].size());
        for (const Infection& inf : state.communities[s]) set.push_back(inf.node);
        std::sort(set.begin(), set.end());
    }
    h.eps_max = r0.eps_max();
    h.levels.push_back({0, static_cast<std::uint32_t>(S), 0, 0, 0, std::nullopt});

    // slot state; a merge reuses the left slot and retires the right one
    std::vector<std::int32_t> R = r0.d;  // S x S, row-major
    auto rat = [&](std::size_t i, std::size_t j) -> std::int32_t& { return R[i * S + j]; };
    std::vector<std::vector<NodeId>> sets = h.end_sets;
    std::vector<std::int64_t> size(S);
    std::vector<bool> alive(S, true);
    std::vector<std::uint64_t> okey(S);
    std::vector<std::uint32_t> id_of(S);  // community id currently in the slot
    std::vector<std::uint32_t> alive_list(S), pos_in_list(S);
    for (std::size_t s = 0; s < S; ++s) {
        size[s] = static_cast<std::int64_t>(sets[s].size());
        okey[s] = s;
        id_of[s] = static_cast<std::uint32_t>(s);
        alive_list[s] = static_cast<std::uint32_t>(s);
        pos_in_list[s] = static_cast<std::uint32_t>(s);
    }
    std::uint64_t next_okey = S;
    auto retire = [&](std::uint32_t slot) {
        const std::uint32_t p = pos_in_list[slot];
        alive_list[p] = alive_list.back();
        pos_in_list[alive_list[p]] = p;
        alive_list.pop_back();
        alive[slot] = false;
    };

    // pairwise intersection counts
    std::vector<std::int32_t> I(S * S, 0);
    auto iat = [&](std::size_t i, std::size_t j) -> std::int32_t& { return I[i * S + j]; };
    std::vector<std::vector<std::uint32_t>> members;  // node -> alive slots containing it
    {
        std::size_t n_nodes = state.histories.size();
        members.resize(n_nodes);
        for (std::uint32_t s = 0; s < S; ++s)
            for (NodeId v : sets[s]) members[v].push_back(s);
        for (std::size_t v = 0; v < n_nodes; ++v) {
            const auto& m = members[v];
            for (std::size_t a = 0; a < m.size(); ++a)
                for (std::size_t b = a + 1; b < m.size(); ++b) {
                    ++iat(m[a], m[b]);
                    ++iat(m[b], m[a]);
                }
        }
    }

    // jaccard(a, b) > jaccard(c, d) via exact cross-multiplication
    auto j_greater = [](std::int64_t i1, std::int64_t u1, std::int64_t i2, std::int64_t u2) {
        return i1 * u2 > i2 * u1;
    };

    std::vector<std::int32_t> triple(S, 0);
    std::vector<std::uint32_t> touched;
    std::priority_queue<detail::PairKey, std::vector<detail::PairKey>, std::greater<>> heap;

    std::int32_t eps = 1;
    while (eps <= h.eps_max && alive_list.size() > 1) {
        // collect the eps-pairs present when the level opens; remember the
        // nearest later level so runs of empty levels need no further scans
        std::int32_t next_working = kDistInf;
        for (std::size_t a = 0; a < alive_list.size(); ++a) {
            const std::uint32_t sa = alive_list[a];
            const std::int32_t* row = &R[static_cast<std::size_t>(sa) * S];
            for (std::size_t b = a + 1; b < alive_list.size(); ++b) {
                const std::uint32_t sb = alive_list[b];
                const std::int32_t d = row[sb];
                if (d == eps)
                    heap.push({std::min(okey[sa], okey[sb]), std::max(okey[sa], okey[sb]),
                               std::min(sa, sb), std::max(sa, sb)});
                else if (d > eps && d < next_working)
                    next_working = d;
            }
        }
        std::uint32_t merges = 0, consistent = 0;
        while (!heap.empty()) {
            detail::PairKey k = heap.top();
            heap.pop();
            const std::uint32_t p = k.slot_a, q = k.slot_b;
            if (!alive[p] || !alive[q]) continue;
            if (std::min(okey[p], okey[q]) != k.lo || std::max(okey[p], okey[q]) != k.hi)
                continue;  // slot reused since the entry was pushed

            // J-D consistency against the pre-merge matrices
            const std::int64_t ipq = iat(p, q);
            const std::int64_t upq = size[p] + size[q] - ipq;
            const std::int32_t* rp = &R[static_cast<std::size_t>(p) * S];
            const std::int32_t* rq = &R[static_cast<std::size_t>(q) * S];
            const std::int32_t* ip = &I[static_cast<std::size_t>(p) * S];
            const std::int32_t* iq = &I[static_cast<std::size_t>(q) * S];
            bool good = true;
            for (const std::uint32_t z : alive_list) {
                if (z == p || z == q) continue;
                if (rp[z] > eps || rq[z] > eps) {
                    if (!j_greater(ipq, upq, ip[z], size[p] + size[z] - ip[z]) ||
                        !j_greater(ipq, upq, iq[z], size[q] + size[z] - iq[z])) {
                        good = false;
                        break;
                    }
                }
            }

            // operands in label order: the row-major scan names the earlier
            // label first, and the merged handle concatenates in that order
            const std::uint32_t lo = okey[p] < okey[q] ? p : q;
            const std::uint32_t hi = lo == p ? q : p;
            const std::uint32_t merged_id = static_cast<std::uint32_t>(S + h.events.size());
            h.events.push_back({eps, id_of[lo], id_of[hi], merged_id, good});
            ++merges;
            if (good) ++consistent;

            // union node set, triple-intersection correction over p n q
            std::vector<NodeId> uni;
            uni.reserve(sets[p].size() + sets[q].size());
            touched.clear();
            {
                const auto& A = sets[p];
                const auto& B = sets[q];
                std::size_t a = 0, b = 0;
                while (a < A.size() || b < B.size()) {
                    NodeId v;
                    bool in_both = false;
                    if (b == B.size() || (a < A.size() && A[a] < B[b]))
                        v = A[a++];
                    else if (a == A.size() || B[b] < A[a])
                        v = B[b++];
                    else {
                        v = A[a];
                        ++a, ++b;
                        in_both = true;
                    }
                    uni.push_back(v);
                    if (in_both) {
                        auto& mv = members[v];
                        for (std::uint32_t r : mv)
                            if (r != p && r != q) {
                                if (triple[r] == 0) touched.push_back(r);
                                ++triple[r];
                            }
                        mv.erase(std::find(mv.begin(), mv.end(), q));
                    }
                }
            }
            // nodes only in q: repoint their membership from q to p
            for (NodeId v : sets[q]) {
                auto& mv = members[v];
                auto it = std::find(mv.begin(), mv.end(), q);
                if (it != mv.end()) *it = p;
            }

            retire(q);
            id_of[p] = merged_id;
            okey[p] = next_okey++;
            std::int32_t* wrp = &R[static_cast<std::size_t>(p) * S];
            std::int32_t* wip = &I[static_cast<std::size_t>(p) * S];
            for (const std::uint32_t r : alive_list) {
                if (r == p) continue;
                const std::int32_t ni = wip[r] + iat(q, r) - triple[r];
                wip[r] = ni;
                iat(r, p) = ni;
                const std::int32_t nd = std::max(wrp[r], rat(q, r));
                wrp[r] = nd;
                rat(r, p) = nd;
                if (nd == eps)
                    heap.push({std::min(okey[r], okey[p]), std::max(okey[r], okey[p]),
                               std::min(r, p), std::max(r, p)});
                else if (nd > eps && nd < next_working)
                    next_working = nd;
            }
            for (std::uint32_t r : touched) triple[r] = 0;

            size[p] = static_cast<std::int64_t>(uni.size());
            sets[p] = std::move(uni);
            sets[q].clear();
            sets[q].shrink_to_fit();
        }

        h.levels.push_back({eps, static_cast<std::uint32_t>(alive_list.size()), merges, merges,
                            consistent,
                            merges > 0 ? std::optional<double>(static_cast<double>(consistent) /
                                                               static_cast<double>(merges))
                                       : std::nullopt});
        if (alive_list.size() == 1) break;
        if (next_working == kDistInf) {
            // every remaining pair is unreachable: survivors are sub-components
            h.truncated_by_disconnection = true;
            break;
        }
        // levels without a candidate pair keep the hierarchy unchanged
        for (std::int32_t e = eps + 1; e < std::min(next_working, h.eps_max + 1); ++e)
            h.levels.push_back({e, static_cast<std::uint32_t>(alive_list.size()), 0, 0, 0,
                                std::nullopt});
        eps = next_working;
    }

    const std::uint32_t alive_count = static_cast<std::uint32_t>(alive_list.size());

    h.surviving = alive_count;
    if (h.surviving > 1) h.truncated_by_disconnection = true;

    const std::uint32_t total = static_cast<std::uint32_t>(h.events.size());
    std::uint32_t cons = 0;
    for (const MergeEvent& e : h.events) cons += e.jd_consistent ? 1 : 0;
    h.phi.consistent_events = cons;
    h.phi.total_events = total;
    if (S > 2) {
        h.phi.applicable = true;
        double v = (static_cast<double>(cons) - 1.0) / (static_cast<double>(S) - 2.0);
        h.phi.value = std::clamp(v, 0.0, 1.0);
    } else {
        h.phi.applicable = false;
        h.phi.value = 1.0;
    }
    return h;
}

inline PhiValue phi(const CommunityHierarchy& h) { return h.phi; }

enum class CutoffTag { Plateau, PhiPeak, Both };

inline const char* to_string(CutoffTag t) {
    switch (t) {
        case CutoffTag::Plateau: return "plateau";
        case CutoffTag::PhiPeak: return "phi-peak";
        case CutoffTag::Both: return "both";
    }
    return "?";
}

struct CutoffSuggestion {
    std::int32_t eps;
    CutoffTag tag;
    std::uint32_t communities;  // |R_eps| at that level
};

struct CutoffReport {
    std::vector<CutoffSuggestion> suggestions;
    std::string note;  // set when no suggestion qualified
};

/// Cutoff-level candidates: (a) plateau entries, where a level with merges is
/// followed by a level without; (b) interior strict local maxima of the
/// phi_eps curve over levels where it is defined.
inline CutoffReport suggest_cutoffs(const CommunityHierarchy& h) {
    CutoffReport out;
    const auto& L = h.levels;
    std::vector<std::pair<std::int32_t, CutoffTag>> found;
    for (std::size_t i = 1; i + 1 < L.size(); ++i)
        if (L[i].delta > 0 && L[i + 1].delta == 0) found.emplace_back(L[i].eps, CutoffTag::Plateau);
    std::vector<std::pair<std::int32_t, double>> defined;
    for (const auto& lv : L)
        if (lv.phi_eps) defined.emplace_back(lv.eps, *lv.phi_eps);
    for (std::size_t i = 1; i + 1 < defined.size(); ++i)
        if (defined[i].second > defined[i - 1].second && defined[i].second > defined[i + 1].second)
            found.emplace_back(defined[i].first, CutoffTag::PhiPeak);
    std::sort(found.begin(), found.end());
    for (std::size_t i = 0; i < found.size();) {
        std::int32_t eps = found[i].first;
        CutoffTag tag = found[i].second;
        if (i + 1 < found.size() && found[i + 1].first == eps) {
            tag = CutoffTag::Both;
            ++i;
        }
        std::uint32_t comms = 0;
        for (const auto& lv : L)
            if (lv.eps == eps) comms = lv.size_after;
        out.suggestions.push_back({eps, tag, comms});
        ++i;
    }
    if (out.suggestions.empty()) out.note = "no plateau or phi-peak signal in the curves";
    return out;
}

}  // namespace commdet

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commdet/falsify.hpp"
#include "commdet/io.hpp"
#include "commdet/pipeline.hpp"

namespace commdet {

inline constexpr int kReportSchemaVersion = 1;

struct ReportOptions {
    PipelineOptions pipeline;
    bool falsify = false;
    std::size_t replicates = 10;
    std::uint64_t seed = 42;
    bool numeric_ids = false;
    bool normalize_timing = false;
    std::string network_name;  // defaults to input file stem
};

/// Everything the detection produces on one network: the summary metric row,
/// curves, cutoff suggestions, optional falsifiability verdict, timings and
/// cleaning warnings.
struct DetectionReport {
    std::string network;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::array<std::size_t, 5> role_counts{};  // hub, inner, boundary, leaf, isolated by Role enum
    std::vector<std::string> hub_labels;
    std::size_t multi_membership = 0;
    std::uint32_t t_fin = 0;
    bool truncated = false;
    double m_h = 0.0;
    double m_x = 0.0;
    std::int32_t eps_max = 0;
    PhiValue phi;
    bool truncated_by_disconnection = false;
    std::uint32_t surviving = 0;
    std::vector<LevelStats> levels;
    CutoffReport cutoffs;
    std::vector<std::uint64_t> step_infections;
    std::optional<FalsifiabilityVerdict> falsifiability;
    StepTimings timings;
    std::vector<double> step2_cumulative_seconds;
    CleaningStats cleaning;
    ReportOptions options;
};

inline DetectionReport assemble_report(const Graph& g, const PipelineResult& r,
                                       const ReportOptions& opts) {
    DetectionReport rep;
    rep.network = opts.network_name;
    rep.nodes = g.node_count();
    rep.edges = g.edge_count();
    rep.role_counts = r.roles.counts;
    for (NodeId h : r.roles.hubs) rep.hub_labels.push_back(g.label(h));
    rep.multi_membership = multi_membership_count(r.state);
    rep.t_fin = r.state.t_fin;
    rep.truncated = r.state.truncated;
    rep.m_h = r.metrics.m_h;
    rep.m_x = r.metrics.m_x;
    rep.eps_max = r.hierarchy.eps_max;
    rep.phi = r.hierarchy.phi;
    rep.truncated_by_disconnection = r.hierarchy.truncated_by_disconnection;
    rep.surviving = r.hierarchy.surviving;
    rep.levels = r.hierarchy.levels;
    rep.cutoffs = suggest_cutoffs(r.hierarchy);
    rep.step_infections = r.state.step_infections;
    rep.timings = r.timings;
    double acc = 0.0;
    for (double s : r.state.step_seconds) rep.step2_cumulative_seconds.push_back(acc += s);
    rep.cleaning = g.cleaning();
    rep.options = opts;
    return rep;
}

inline nlohmann::json to_json(const DetectionReport& rep) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["network"] = rep.network;
    j["nodes"] = rep.nodes;
    j["edges"] = rep.edges;
    j["roles"] = {{"hub", rep.role_counts[0]},
                  {"inner", rep.role_counts[1]},
                  {"boundary", rep.role_counts[2]},
                  {"leaf", rep.role_counts[3]},
                  {"isolated", rep.role_counts[4]}};
    j["hubs"] = rep.hub_labels;
    j["multi_membership_nodes"] = rep.multi_membership;
    j["t_fin"] = rep.t_fin;
    j["truncated"] = rep.truncated;
    j["m_h"] = rep.m_h;
    j["m_x"] = rep.m_x;
    j["eps_max"] = rep.eps_max;
    j["phi"] = {{"value", rep.phi.value},
                {"applicable", rep.phi.applicable},
                {"consistent_merges", rep.phi.consistent_events},
                {"total_merges", rep.phi.total_events}};
    j["surviving_communities"] = rep.surviving;
    j["truncated_by_disconnection"] = rep.truncated_by_disconnection;
    nlohmann::json curves = nlohmann::json::array();
    for (const LevelStats& lv : rep.levels) {
        nlohmann::json c = {{"eps", lv.eps},
                            {"r_size", lv.size_after},
                            {"delta", lv.delta},
                            {"merges", lv.merges},
                            {"consistent", lv.consistent}};
        if (lv.phi_eps)
            c["phi_eps"] = *lv.phi_eps;
        else
            c["phi_eps"] = nullptr;
        curves.push_back(c);
    }
    j["curves"] = curves;
    nlohmann::json cuts = nlohmann::json::array();
    for (const CutoffSuggestion& s : rep.cutoffs.suggestions)
        cuts.push_back({{"eps", s.eps}, {"tag", to_string(s.tag)}, {"communities", s.communities}});
    j["cutoffs"] = cuts;
    if (!rep.cutoffs.note.empty()) j["cutoff_note"] = rep.cutoffs.note;
    j["step_infections"] = rep.step_infections;
    if (rep.falsifiability) {
        const FalsifiabilityVerdict& f = *rep.falsifiability;
        nlohmann::json nulls_phi = nlohmann::json::array();
        for (double v : f.null_phis)
            if (std::isnan(v))
                nulls_phi.push_back(nullptr);
            else
                nulls_phi.push_back(v);
        j["falsifiability"] = {{"verdict", to_string(f.verdict)},
                               {"reason", f.reason},
                               {"real_hub_fraction", f.real_hub_fraction},
                               {"real_phi", f.real_phi},
                               {"real_phi_applicable", f.real_phi_applicable},
                               {"null_hub_fractions", f.null_hub_fractions},
                               {"null_phis", nulls_phi},
                               {"null_hub_fraction_median", f.null_hub_fraction_median},
                               {"null_phi_median", f.null_phi_median},
                               {"seed", f.seed},
                               {"replicate_seeds", f.replicate_seeds}};
    }
    j["warnings"] = {{"self_loops_removed", rep.cleaning.self_loops},
                     {"duplicate_edges_removed", rep.cleaning.duplicate_edges},
                     {"zero_degree_removed", rep.cleaning.zero_degree_nodes},
                     {"truncated", rep.truncated}};
    j["timing"] = {{"step1_seconds", rep.timings.step1},
                   {"step2_seconds", rep.timings.step2},
                   {"step3_seconds", rep.timings.step3},
                   {"step4_seconds", rep.timings.step4},
                   {"total_seconds", rep.timings.total},
                   {"step2_cumulative_seconds", rep.step2_cumulative_seconds}};
    if (rep.options.normalize_timing && !rep.step2_cumulative_seconds.empty()) {
        nlohmann::json norm = nlohmann::json::array();
        const double last = rep.step2_cumulative_seconds.back();
        const std::size_t n = rep.step2_cumulative_seconds.size();
        for (std::size_t i = 0; i < n; ++i)
            norm.push_back({{"t", static_cast<double>(i + 1) / static_cast<double>(n)},
                            {"time", last > 0 ? rep.step2_cumulative_seconds[i] / last : 0.0}});
        j["timing"]["step2_cumulative_normalized"] = norm;
    }
    j["options"] = {{"centrality", to_string(rep.options.pipeline.centrality)},
                    {"t_max", rep.options.pipeline.t_max},
                    {"workers", rep.options.pipeline.workers},
                    {"overlap_steps", rep.options.pipeline.overlap_steps},
                    {"falsify", rep.options.falsify},
                    {"replicates", rep.options.replicates},
                    {"seed", rep.options.seed}};
    return j;
}

/// Curves CSV: one row per hierarchy level.
inline void write_curves_csv(const DetectionReport& rep, std::ostream& out) {
    out << "eps,r_size,delta,phi_eps\n";
    for (const LevelStats& lv : rep.levels) {
        out << lv.eps << ',' << lv.size_after << ',' << lv.delta << ',';
        if (lv.phi_eps) out << *lv.phi_eps;
        out << '\n';
    }
}

/// Step-2 timing CSV (cumulative per iteration, optionally normalized).
inline void write_timing_csv(const DetectionReport& rep, std::ostream& out) {
    out << "iteration,cumulative_seconds,normalized_iteration,normalized_time\n";
    const std::size_t n = rep.step2_cumulative_seconds.size();
    const double last = n ? rep.step2_cumulative_seconds.back() : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out << (i + 1) << ',' << rep.step2_cumulative_seconds[i] << ','
            << static_cast<double>(i + 1) / static_cast<double>(n) << ','
            << (last > 0 ? rep.step2_cumulative_seconds[i] / last : 0.0) << '\n';
    }
}

/// X and H as JSON, communities keyed by hub label.
inline nlohmann::json propagation_to_json(const Graph& g, const RoleAssignment& roles,
                                          const PropagationState& st) {
    nlohmann::json communities = nlohmann::json::object();
    for (std::size_t s = 0; s < st.communities.size(); ++s) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Infection& i : st.communities[s])
            arr.push_back({g.label(i.node), i.time});
        communities[g.label(roles.hubs[s])] = arr;
    }
    nlohmann::json histories = nlohmann::json::object();
    for (NodeId u = 0; u < g.node_count(); ++u) {
        nlohmann::json arr = nlohmann::json::array();
        for (const LabelHit& h : st.histories[u])
            arr.push_back({g.label(roles.hubs[h.community]), h.time});
        histories[g.label(u)] = arr;
    }
    return {{"communities", communities}, {"histories", histories}};
}

/// Merge events, per-level membership and curves as JSON.
inline nlohmann::json hierarchy_to_json(const Graph& g, const CommunityHierarchy& h) {
    nlohmann::json events = nlohmann::json::array();
    for (const MergeEvent& e : h.events)
        events.push_back({{"eps", e.eps},
                          {"left", h.handle(e.left)},
                          {"right", h.handle(e.right)},
                          {"merged", h.handle(e.merged)},
                          {"jd_consistent", e.jd_consistent}});
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelStats& lv : h.levels) {
        nlohmann::json members = nlohmann::json::object();
        for (std::uint32_t id : h.ids_at(lv.eps)) {
            nlohmann::json nodes = nlohmann::json::array();
            for (NodeId v : h.node_set(id)) nodes.push_back(g.label(v));
            members[h.handle(id)] = nodes;
        }
        levels.push_back({{"eps", lv.eps},
                          {"r_size", lv.size_after},
                          {"delta", lv.delta},
                          {"phi_eps", lv.phi_eps ? nlohmann::json(*lv.phi_eps) : nlohmann::json()},
                          {"communities", members}});
    }
    return {{"events", events},
            {"levels", levels},
            {"eps_max", h.eps_max},
            {"truncated_by_disconnection", h.truncated_by_disconnection}};
}

struct PipelineRun {
    Graph graph;
    PipelineResult result;
    DetectionReport report;
};

/// Load a graph (plain or gzip edge list), run the four steps and assemble
/// the report; optionally follow with the falsifiability benchmark.
inline PipelineRun run_pipeline(const std::string& input_path, ReportOptions opts) {
    if (opts.network_name.empty())
        opts.network_name = std::filesystem::path(input_path).stem().string();
    std::istringstream in(read_file(input_path));
    PipelineRun run;
    run.graph = load_edge_list(in, LoadOptions{opts.numeric_ids});
    run.result = run_steps(run.graph, opts.pipeline);
    run.report = assemble_report(run.graph, run.result, opts);
    if (opts.falsify)
        run.report.falsifiability = falsifiability_check(run.graph, run.result, opts.replicates,
                                                         opts.seed, opts.pipeline.workers);
    return run;
}

struct ScalingPoint {
    std::string network;
    std::size_t edges;
    double total_seconds;
};

struct ScalingSummary {
    double slope = 0.0;  // least-squares d log10(time) / d log10(E)
    std::vector<ScalingPoint> points;
};

class scaling_refusal : public std::runtime_error {
public:
    explicit scaling_refusal(const std::string& what) : std::runtime_error(what) {}
};

/// Log-log least-squares slope of total detection time against edge count.
/// Refuses when fewer than 3 reports, the edge counts span under two decades,
/// or the regressor is degenerate.
inline ScalingSummary timing_scaling_report(const std::vector<DetectionReport>& reports) {
    if (reports.size() < 3)
        throw scaling_refusal("need at least 3 reports, got " + std::to_string(reports.size()));
    ScalingSummary out;
    std::size_t emin = SIZE_MAX, emax = 0;
    for (const DetectionReport& r : reports) {
        if (r.timings.total <= 0.0)
            throw scaling_refusal("non-positive total time for " + r.network);
        emin = std::min(emin, r.edges);
        emax = std::max(emax, r.edges);
        out.points.push_back({r.network, r.edges, r.timings.total});
    }
    if (emax < 100 * emin)
        throw scaling_refusal("edge counts must span at least two decades");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(reports.size());
    for (const ScalingPoint& p : out.points) {
        const double x = std::log10(static_cast<double>(p.edges));
        const double y = std::log10(p.total_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double var = sxx - sx * sx / n;
    if (var <= 0.0) throw scaling_refusal("edge counts are degenerate; slope undefined");
    out.slope = (sxy - sx * sy / n) / var;
    return out;
}

inline nlohmann::json to_json(const ScalingSummary& s) {
    nlohmann::json pts = nlohmann::json::array();
    for (const ScalingPoint& p : s.points)
        pts.push_back({{"network", p.network}, {"edges", p.edges}, {"total_seconds", p.total_seconds}});
    return {{"slope", s.slope}, {"points", pts}};
}

}  // namespace commdet

#pragma once

#include <chrono>
#include <cstdint>
#include <future>

#include "commdet/centrality.hpp"
#include "commdet/distance.hpp"
#include "commdet/graph.hpp"
#include "commdet/hierarchy.hpp"
#include "commdet/propagation.hpp"
#include "commdet/roles.hpp"

namespace commdet {

struct PipelineOptions {
    CentralityMeasure centrality = CentralityMeasure::Degree;
    std::uint32_t t_max = 0;       // 0 = node count
    unsigned workers = 1;
    bool overlap_steps = false;    // run propagation and hub distances concurrently
};

struct StepTimings {
    double step1 = 0.0;  // centrality + roles
    double step2 = 0.0;  // propagation
    double step3 = 0.0;  // hub distances (R0)
    double step4 = 0.0;  // hierarchy + consistency
    double total = 0.0;
};

struct PipelineResult {
    CentralityVector centrality;
    RoleAssignment roles;
    PropagationState state;
    OverlapMetrics metrics;
    DistanceMatrix r0;
    CommunityHierarchy hierarchy;
    StepTimings timings;
};

/// The four detection steps on a loaded graph. R0 depends only on the hub
/// set, so step 3 may overlap with step 2; numeric results are identical
/// either way.
inline PipelineResult run_steps(const Graph& g, const PipelineOptions& opts) {
    using clock = std::chrono::steady_clock;
    auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
    PipelineResult r;

    auto t0 = clock::now();
    r.centrality = opts.centrality == CentralityMeasure::Degree ? degree_centrality(g)
                                                                : eigenvector_centrality(g);
    r.roles = classify_roles(g, r.centrality);
    auto t1 = clock::now();
    r.timings.step1 = secs(t0, t1);
    if (r.roles.hubs.empty())
        throw degenerate_graph_error("no hubs identified; every node ties its neighbors");

    if (opts.overlap_steps) {
        auto fut = std::async(std::launch::async, [&] {
            return hub_distances(g, r.roles.hubs, opts.workers);
        });
        auto t2a = clock::now();
        r.state = propagate(g, r.centrality, r.roles, opts.t_max);
        auto t2b = clock::now();
        r.r0 = fut.get();
        auto t3 = clock::now();
        r.timings.step2 = secs(t2a, t2b);
        r.timings.step3 = secs(t2b, t3);  // remaining wait after propagation
    } else {
        auto t2a = clock::now();
        r.state = propagate(g, r.centrality, r.roles, opts.t_max);
        auto t2b = clock::now();
        r.r0 = hub_distances(g, r.roles.hubs, opts.workers);
        auto t3 = clock::now();
        r.timings.step2 = secs(t2a, t2b);
        r.timings.step3 = secs(t2b, t3);
    }
    r.metrics = overlap_metrics(r.state, g);

    auto t4a = clock::now();
    r.hierarchy = build_hierarchy(r.state, r.r0);
    auto t4b = clock::now();
    r.timings.step4 = secs(t4a, t4b);
    r.timings.total = r.timings.step1 + r.timings.step2 + r.timings.step3 + r.timings.step4;
    return r;
}

}  // namespace commdet

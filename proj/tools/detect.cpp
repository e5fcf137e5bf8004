#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commdet/commdet.hpp"

namespace {

// exit codes: 0 ok, 1 usage/unexpected, 2 parse error, 3 degenerate graph,
// 4 suspect verdict under --strict
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitSuspect = 4;

std::string resolve_input(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (!fs::path(path).is_absolute()) {
        if (const char* dir = std::getenv("DETECT_DATA_DIR")) {
            fs::path alt = fs::path(dir) / path;
            if (fs::exists(alt)) return alt.string();
        }
    }
    return path;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int run_scaling(const std::vector<std::string>& report_paths, const std::string& out_path) {
    std::vector<commdet::DetectionReport> reports;
    for (const std::string& p : report_paths) {
        std::ifstream in(p);
        if (!in) {
            std::cerr << "cannot read " << p << "\n";
            return 1;
        }
        nlohmann::json j = nlohmann::json::parse(in);
        commdet::DetectionReport r;
        r.network = j.value("network", p);
        r.edges = j.at("edges").get<std::size_t>();
        r.timings.total = j.at("timing").at("total_seconds").get<double>();
        reports.push_back(std::move(r));
    }
    try {
        commdet::ScalingSummary s = commdet::timing_scaling_report(reports);
        nlohmann::json j = commdet::to_json(s);
        std::cout << j.dump(2) << "\n";
        if (!out_path.empty()) write_text(out_path, j.dump(2) + "\n");
        return 0;
    } catch (const commdet::scaling_refusal& e) {
        std::cerr << "scaling refused: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical overlapping community detection on undirected graphs"};

    std::string input, out_path, curves_path, roles_path, hierarchy_path, propagation_path,
        timing_csv_path, name, centrality = "degree";
    std::uint32_t t_max = 0;
    bool falsify = false, strict = false, numeric_ids = false, overlap_steps = false,
         normalize_timing = false, quiet = false;
    std::size_t replicates = 10;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    std::vector<std::string> scaling_reports;

    app.add_option("--input", input, "edge-list file (optionally gzip-compressed)");
    app.add_option("--centrality", centrality, "degree|eigenvector")
        ->check(CLI::IsMember({"degree", "eigenvector"}));
    app.add_option("--tmax", t_max, "propagation step cap (0 = node count)");
    app.add_flag("--falsify", falsify, "run the ER null-model benchmark");
    app.add_option("--replicates", replicates, "null replicates for --falsify");
    app.add_option("--seed", seed, "RNG seed for the null replicates");
    app.add_flag("--strict", strict, "exit nonzero when the verdict is suspect");
    app.add_option("--out", out_path, "write the JSON report here");
    app.add_option("--curves", curves_path, "write the per-level curves CSV here");
    app.add_option("--timing-csv", timing_csv_path, "write the step-2 timing CSV here");
    app.add_option("--roles", roles_path, "write the node role CSV here");
    app.add_option("--hierarchy", hierarchy_path, "write the full hierarchy JSON here");
    app.add_option("--propagation", propagation_path, "write X/H membership JSON here");
    app.add_option("--workers", workers, "worker threads (never changes numeric output)");
    app.add_flag("--overlap-steps", overlap_steps, "run steps 2 and 3 concurrently");
    app.add_flag("--numeric-ids", numeric_ids, "require numeric node ids");
    app.add_flag("--normalize-timing", normalize_timing, "add normalized step-2 timing series");
    app.add_option("--name", name, "network name for the report (default: file stem)");
    app.add_flag("--quiet", quiet, "suppress the summary line");
    app.add_option("--scaling", scaling_reports, "fit a runtime scaling slope over report JSONs")
        ->expected(-1);

    CLI11_PARSE(app, argc, argv);

    if (!scaling_reports.empty()) return run_scaling(scaling_reports, out_path);
    if (input.empty()) {
        std::cerr << "--input is required\n";
        return 1;
    }

    commdet::ReportOptions opts;
    opts.pipeline.centrality = centrality == "degree" ? commdet::CentralityMeasure::Degree
                                                      : commdet::CentralityMeasure::Eigenvector;
    opts.pipeline.t_max = t_max;
    opts.pipeline.workers = workers;
    opts.pipeline.overlap_steps = overlap_steps;
    opts.falsify = falsify;
    opts.replicates = replicates;
    opts.seed = seed;
    opts.numeric_ids = numeric_ids;
    opts.normalize_timing = normalize_timing;
    opts.network_name = name;

    try {
        commdet::PipelineRun run = commdet::run_pipeline(resolve_input(input), opts);
        const commdet::DetectionReport& report = run.report;

        if (!out_path.empty()) write_text(out_path, commdet::to_json(report).dump(2) + "\n");
        if (!curves_path.empty()) {
            std::ofstream c(curves_path);
            commdet::write_curves_csv(report, c);
        }
        if (!timing_csv_path.empty()) {
            std::ofstream t(timing_csv_path);
            commdet::write_timing_csv(report, t);
        }
        if (!roles_path.empty()) {
            std::ofstream rs(roles_path);
            commdet::write_roles_csv(run.graph, run.result.roles, rs);
        }
        if (!hierarchy_path.empty())
            write_text(hierarchy_path,
                       commdet::hierarchy_to_json(run.graph, run.result.hierarchy).dump(2) + "\n");
        if (!propagation_path.empty())
            write_text(propagation_path,
                       commdet::propagation_to_json(run.graph, run.result.roles, run.result.state)
                               .dump(2) + "\n");

        if (!quiet) {
            std::cout << report.network << ": N=" << report.nodes << " E=" << report.edges
                      << " hubs=" << report.role_counts[0] << " t_fin=" << report.t_fin
                      << " m_h=" << report.m_h << " m_x=" << report.m_x
                      << " eps_max=" << report.eps_max << " phi=" << report.phi.value
                      << (report.phi.applicable ? "" : " (n/a)") << "\n";
            if (report.falsifiability)
                std::cout << "falsifiability: " << commdet::to_string(report.falsifiability->verdict)
                          << " (" << report.falsifiability->reason << ")\n";
        }
        if (strict && report.falsifiability &&
            report.falsifiability->verdict == commdet::Verdict::Suspect)
            return kExitSuspect;
        return 0;
    } catch (const commdet::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const commdet::empty_graph_error& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const commdet::degenerate_graph_error& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

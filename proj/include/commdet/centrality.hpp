#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "commdet/graph.hpp"

namespace commdet {

enum class CentralityMeasure { Degree, Eigenvector };

inline const char* to_string(CentralityMeasure m) {
    return m == CentralityMeasure::Degree ? "degree" : "eigenvector";
}

struct CentralityVector {
    CentralityMeasure measure = CentralityMeasure::Degree;
    std::vector<double> scores;

    double operator[](NodeId u) const { return scores[u]; }

    /// Comparison slack for "equal centrality". Degree scores are exact
    /// integers; eigenvector scores get a relative tolerance so float noise
    /// does not produce spurious strict inequalities.
    double equality_tolerance() const {
        if (measure == CentralityMeasure::Degree) return 0.0;
        double mx = 0.0;
        for (double s : scores) mx = std::max(mx, s);
        return 1e-9 * mx;
    }
};

/// Power iteration failed to converge; carries the last iterate.
class convergence_error : public std::runtime_error {
public:
    convergence_error(std::size_t iterations, std::vector<double> last)
        : std::runtime_error("eigenvector centrality did not converge after " +
                             std::to_string(iterations) + " iterations"),
          last_iterate_(std::move(last)) {}
    const std::vector<double>& last_iterate() const { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

inline CentralityVector degree_centrality(const Graph& g) {
    CentralityVector c;
    c.measure = CentralityMeasure::Degree;
    c.scores.resize(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) c.scores[u] = static_cast<double>(g.degree(u));
    return c;
}

/// Power iteration on A + I (the shift keeps bipartite graphs from
/// oscillating; fixed points of A·c = λ·c are unchanged). L2-normalized,
/// uniform positive start, converged when the successive-iterate max-abs
/// difference drops below tol.
inline CentralityVector eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                               std::size_t max_iter = 1000) {
    const std::size_t n = g.node_count();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (NodeId u = 0; u < n; ++u) {
            double acc = x[u];  // +I shift
            for (NodeId v : g.neighbors(u)) acc += x[v];
            next[u] = acc;
        }
        double norm = 0.0;
        for (double v : next) norm += v * v;
        norm = std::sqrt(norm);
        double diff = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            next[u] /= norm;
            diff = std::max(diff, std::fabs(next[u] - x[u]));
        }
        x.swap(next);
        if (diff < tol) {
            CentralityVector c;
            c.measure = CentralityMeasure::Eigenvector;
            c.scores = std::move(x);
            return c;
        }
    }
    throw convergence_error(max_iter, std::move(x));
}

}  // namespace commdet

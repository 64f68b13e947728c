#pragma once

#include <set>
#include <string>
#include <vector>

#include "pfg/solver.hpp"

namespace pfg::clients {

struct Metrics {
    std::set<std::string> failCasts;  // cast labels
    std::size_t reachMtd = 0;
    std::set<std::string> polyCalls;  // call-site labels
    std::size_t callEdge = 0;

    std::size_t failCast() const { return failCasts.size(); }
    std::size_t polyCall() const { return polyCalls.size(); }
};

Metrics computeMetrics(const ProgramIndex& index, const AnalysisResult& r);

inline constexpr const char* kMetricNames[] = {"failCast", "reachMtd", "polyCall", "callEdge"};
std::size_t metricValue(const Metrics& m, int which);

// a <= b on every metric.
bool dominates(const Metrics& a, const Metrics& b);

enum class Relation { Less, Equal, Greater };

struct Comparison {
    std::vector<std::pair<std::string, Metrics>> rows;
    // relations[i - 1][m]: row i against row 0, metric m.
    std::vector<std::vector<Relation>> relations;
    // dominatesBase[i - 1]: row i <= row 0 on all metrics.
    std::vector<bool> dominatesBase;
};

Comparison compareMetrics(std::vector<std::pair<std::string, Metrics>> rows);
std::string renderTable(const Comparison& c);
std::string renderCsv(const Comparison& c);

// Pointers whose points-to set in `r` is not contained in `base`, one line each.
std::vector<std::string> checkDominance(const AnalysisResult& r, const AnalysisResult& base);

// Sorted-key JSON report for one analysis run.
std::string reportJson(const AnalysisResult& r, const Metrics& m, bool timedOut = false);

}  // namespace pfg::clients

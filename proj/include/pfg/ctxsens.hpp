#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <tuple>

#include "pfg/solver.hpp"

namespace pfg::ctx {

enum class Flavor { CallSite, Object };

struct CSObject {
    std::string site;
    std::string heapContext;
    auto operator<=>(const CSObject&) const = default;
};

// Contexts are rendered as "[e1,e2]" with the most recent element first.
struct CSResult {
    std::map<std::pair<std::string, std::string>, std::set<CSObject>> pt;  // (context, pointer)
    // (caller context, call-site label, callee context, callee)
    std::set<std::tuple<std::string, std::string, std::string, std::string>> callGraph;
    std::set<std::pair<std::string, std::string>> reachable;  // (method, context)
    std::set<std::tuple<std::string, std::string, EdgeKind>> projectedEdges;
    std::vector<ir::Diagnostic> diagnostics;
    bool timedOut = false;
};

struct Limits {
    // Gives up (timedOut) once this much wall time has passed.
    std::optional<std::chrono::milliseconds> timeBudget;
};

CSResult solveContextSensitive(const ProgramIndex& index, Flavor flavor, int k, const Limits& limits = {});

AnalysisResult projectToCI(const CSResult& r);

}  // namespace pfg::ctx

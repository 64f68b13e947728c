#pragma once

// Exhaustive bounded execution of a program; every `if *` is tried both ways.
// Objects are projected to their allocation sites.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pfg/solver.hpp"

namespace pfg::interp {

struct Budget {
    std::size_t maxStepsPerPath = 10000;
    std::size_t maxPaths = 1024;
};

enum class CastOutcome { AlwaysOk, MayFail };

struct DynamicFacts {
    std::set<std::string> reachMethods;
    std::set<std::pair<std::string, std::string>> callEdges;   // (call-site label, callee)
    std::map<std::string, std::set<std::string>> varPointsTo;    // "Class.method/x"
    std::map<std::string, std::set<std::string>> fieldPointsTo;  // "site.field"
    std::map<std::string, CastOutcome> castOutcomes;
    std::size_t paths = 0;
    std::size_t nullDerefs = 0;
    bool exhausted = false;
};

DynamicFacts explore(const ProgramIndex& index, const Budget& budget = {});

std::string factsJson(const DynamicFacts& facts);

// Dynamic facts the static result fails to cover, one readable line each.
std::vector<std::string> checkRecall(const DynamicFacts& facts, const AnalysisResult& result);

}  // namespace pfg::interp

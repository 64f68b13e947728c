#pragma once

// Context-insensitive rules applied by brute force: every rule over every
// reachable statement, repeated until nothing changes. Keyed by strings and
// built straight from the syntax tree, sharing nothing with the solver.

#include <map>
#include <set>
#include <string>
#include <tuple>

#include "pfg/ir.hpp"

namespace testing {

struct Reference {
    std::map<std::string, std::set<std::string>> pt;  // nonempty sets only
    std::set<std::tuple<std::string, std::string, std::string>> edges;  // src, dst, kind
    std::set<std::pair<std::string, std::string>> callGraph;
    std::set<std::string> reachable;
};

Reference referenceCI(const pfg::ir::Program& program);

}  // namespace testing

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pfg/solver.hpp"

namespace pfg::csc {

enum class Category { ColValue, MapKey, MapValue };

std::string_view categoryName(Category c);

struct Entrance {
    std::string method;
    int param = 1;
    Category category = Category::ColValue;
};

struct Exit {
    std::string method;
    Category category = Category::ColValue;
};

struct ContainerModel {
    std::vector<Entrance> entrances;
    std::vector<Exit> exits;
    std::set<std::string> transfers;
    std::set<std::string> collectionRoots;
    std::set<std::string> mapRoots;
    // Methods of container classes the model leaves unclassified.
    std::vector<std::string> warnings;
};

// Parses the JSON model and validates it against `program`. Throws Model errors.
ContainerModel loadContainerModel(std::string_view text, const ir::Program& program);

enum Pattern : unsigned {
    kFieldPattern = 1,
    kContainerPattern = 2,
    kLocalFlowPattern = 4,
    kAllPatterns = 7,
};

// Parses "field,container,local" (or "all" / "none").
unsigned parsePatterns(std::string_view text);

enum ReturnTag : unsigned {
    kTagFieldLoad = 1,
    kTagContainer = 2,
    kTagLocalFlow = 4,
};

struct CutSets {
    std::set<std::string> cutStores;                 // statement labels
    std::map<std::string, unsigned> cutReturns;      // method -> ReturnTag bits
};

// For each variable of `m`, the parameter indices its values come from when
// they arrive only through local copies. Variables outside the relation are absent.
std::map<std::string, std::set<int>> paramReturnFlow(const ir::MethodDef& m);

struct Options {
    unsigned patterns = kAllPatterns;
    const ContainerModel* model = nullptr;
    bool loadHandling = true;
    // Test hook: suppress the n-th distinct shortcut edge (counting from 0).
    long dropShortcut = -1;
};

CutSets computeCuts(const ProgramIndex& index, const Options& options);

AnalysisResult solveCSC(const ProgramIndex& index, const Options& options);

std::string cutTagNames(unsigned tags);

}  // namespace pfg::csc

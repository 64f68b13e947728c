#pragma once

#include "pfg/cutshortcut.hpp"

namespace pfg::csc::detail {

// Cut sets keyed by ids, the form the policy consumes.
struct CutTable {
    std::vector<std::vector<bool>> cutStore;  // method -> stmt
    std::vector<unsigned> retTags;            // method -> ReturnTag bits
    std::vector<std::set<int>> localFlowParams;
    // Locals copied straight into the return variable and otherwise defined
    // only by loads and calls; the load pattern treats them like the return.
    std::vector<std::set<std::string>> retFeeders;

    bool feedsReturn(MethodId m, const ir::MethodDef& def, const std::string& v) const {
        return (def.retVar && *def.retVar == v) || retFeeders[m].count(v);
    }
};

CutTable computeCutTable(const ProgramIndex& index, const Options& options);

}  // namespace pfg::csc::detail

#pragma once

#include <cstdint>
#include <string>

namespace pfg::stress {

struct StressSpec {
    std::uint64_t seed = 1;
    int nContainers = 1;
    int nFieldWrappers = 0;
    int nLocalFlows = 0;
    // Length of the nested setter/getter chains in the wrapper class.
    int depth = 2;
    // Worker objects that each receive the shared pool of elements.
    int nWorkers = 0;
    // Local copies of the pool inside each worker.
    int workerChain = 48;
};

// Bundled container library and its model, as shipped in corpus/stdlib.
const std::string& containerLibrary();
const std::string& containerModel();

// Deterministic program text; the container library is appended.
std::string generate(const StressSpec& spec);

}  // namespace pfg::stress

#include "corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pfg/stress.hpp"

namespace fs = std::filesystem;

namespace testing {

std::string corpusDir() { return PFG_CORPUS_DIR; }

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::size_t Loaded::statementCount() const {
    std::size_t n = 0;
    for (const auto& c : program->classes) {
        for (const auto& m : c.methods) n += m.body.size();
    }
    return n;
}

Loaded load(const std::string& name, const std::string& text) {
    Loaded l;
    l.name = name;
    l.program = std::make_unique<pfg::ir::Program>(pfg::ir::parseProgram(text));
    auto diags = pfg::ir::checkProgram(*l.program);
    if (!diags.empty()) throw std::runtime_error(name + ": " + diags.front().where + ": " + diags.front().message);
    l.index = std::make_unique<pfg::ir::ProgramIndex>(*l.program);
    if (l.program->findClass("List") && l.program->findClass("Map")) {
        l.model = pfg::csc::loadContainerModel(pfg::stress::containerModel(), *l.program);
    }
    return l;
}

Loaded loadFile(const std::string& relative) {
    return load(relative, readFile(corpusDir() + "/" + relative));
}

namespace {

std::vector<Entry> irFiles(const std::string& sub) {
    std::vector<Entry> out;
    for (const auto& e : fs::directory_iterator(corpusDir() + "/" + sub)) {
        if (e.path().extension() != ".ir") continue;
        out.push_back({sub + "/" + e.path().filename().string(), readFile(e.path().string())});
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
    return out;
}

}  // namespace

std::vector<Entry> paperPrograms() { return irFiles("paper"); }
std::vector<Entry> edgePrograms() { return irFiles("edge"); }

std::vector<Entry> generatedPrograms() {
    std::istringstream in(readFile(corpusDir() + "/gen/seeds.txt"));
    std::vector<Entry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        pfg::stress::StressSpec spec;
        fields >> spec.seed >> spec.nContainers >> spec.nFieldWrappers >> spec.nLocalFlows >> spec.depth >>
            spec.nWorkers >> spec.workerChain;
        if (!fields) throw std::runtime_error("bad seeds line: " + line);
        out.push_back({"gen/seed" + std::to_string(spec.seed), pfg::stress::generate(spec)});
    }
    return out;
}

std::vector<Entry> fullCorpus() {
    auto out = paperPrograms();
    for (auto* part : {&edgePrograms, &generatedPrograms}) {
        auto more = (*part)();
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

}  // namespace testing

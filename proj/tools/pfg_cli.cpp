// Command-line driver. Talks to the engine only through the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pfg/pfg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDominance = 2;
constexpr int kExitRecall = 3;

struct InputError {
    std::string message;
};

void require(pfg_status s, const std::string& what) {
    if (s != PFG_OK) throw InputError{what + ": " + pfg_last_error()};
}

struct Text {
    char* p = nullptr;
    ~Text() { pfg_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
    ~Handle() { Free(p); }
};
using Program = Handle<pfg_program, pfg_program_free>;
using Model = Handle<pfg_model, pfg_model_free>;
using Result = Handle<pfg_result, pfg_result_free>;
using Facts = Handle<pfg_facts, pfg_facts_free>;

void writeOut(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError{"cannot write " + path};
    out << text;
}

struct Common {
    std::string input;
    std::string entry;
    std::string analysis = "csc";
    std::string patterns;
    std::string model;
    bool noLoadHandling = false;
    long dropShortcut = -1;
    long timeBudget = 0;
    std::size_t maxSteps = 10000;
    std::size_t maxPaths = 1024;
    std::string report;
    std::string dot;
};

Program loadProgram(const Common& c) {
    Program p;
    require(pfg_program_load_file(c.input.c_str(), &p.p), "parse");
    if (!c.entry.empty()) require(pfg_program_set_entry(p.p, c.entry.c_str()), "entry");
    Text diags;
    if (pfg_program_check(p.p, &diags.p) != PFG_OK) throw InputError{"check " + c.input + ":\n" + diags.str()};
    return p;
}

Model loadModel(const Common& c, const Program& p) {
    Model m;
    if (c.model.empty()) return m;
    require(pfg_model_load_file(p.p, c.model.c_str(), &m.p), "container model");
    Text warnings;
    require(pfg_model_warnings(m.p, &warnings.p), "container model");
    if (!warnings.str().empty()) std::cerr << "warning: unclassified container methods:\n" << warnings.str();
    return m;
}

Result analyze(const Common& c, const Program& p, const Model& m, const std::string& analysis) {
    pfg_options o;
    pfg_options_init(&o);
    o.analysis = analysis.c_str();
    if (!c.patterns.empty()) require(pfg_parse_patterns(c.patterns.c_str(), &o.patterns), "patterns");
    o.load_handling = c.noLoadHandling ? 0 : 1;
    o.drop_shortcut = c.dropShortcut;
    o.time_budget_ms = c.timeBudget;
    Result r;
    require(pfg_analyze(p.p, m.p, &o, &r.p), analysis);
    if (pfg_result_timed_out(r.p)) std::cerr << "warning: " << analysis << " hit its time budget\n";
    return r;
}

void addProgramOptions(CLI::App* cmd, Common& c) {
    cmd->add_option("input", c.input, "IR source file")->required();
    cmd->add_option("--entry", c.entry, "entry method, Class.method");
}

void addAnalysisOptions(CLI::App* cmd, Common& c) {
    cmd->add_option("--analysis", c.analysis, "ci | csc | kcfa:K | kobj:K");
    cmd->add_option("--patterns", c.patterns, "field,container,local | all | none");
    cmd->add_option("--container-model", c.model, "container model JSON");
    cmd->add_flag("--no-load-handling", c.noLoadHandling, "skip the load half of the field pattern");
    cmd->add_option("--time-budget", c.timeBudget, "milliseconds, context-sensitive runs");
    cmd->add_option("--drop-shortcut", c.dropShortcut)->group("");
}

void addBudgetOptions(CLI::App* cmd, Common& c) {
    cmd->add_option("--max-steps", c.maxSteps, "interpreter steps per path")->check(CLI::PositiveNumber);
    cmd->add_option("--max-paths", c.maxPaths, "interpreter paths")->check(CLI::PositiveNumber);
}

int cmdAnalyze(const Common& c) {
    Program p = loadProgram(c);
    Model m = loadModel(c, p);
    Result r = analyze(c, p, m, c.analysis);
    Text report;
    require(pfg_result_report_json(r.p, &report.p), "report");
    writeOut(c.report, report.str());
    if (!c.dot.empty()) {
        Text dot;
        require(pfg_result_dot(r.p, &dot.p), "dot");
        writeOut(c.dot, dot.str());
    }
    return kExitOk;
}

int cmdInterp(const Common& c) {
    Program p = loadProgram(c);
    Facts f;
    require(pfg_explore(p.p, c.maxSteps, c.maxPaths, &f.p), "interp");
    Text json;
    require(pfg_facts_json(f.p, &json.p), "facts");
    writeOut(c.report, json.str());
    return kExitOk;
}

int cmdCheck(const Common& c) {
    Program p = loadProgram(c);
    Model m = loadModel(c, p);
    Facts f;
    require(pfg_explore(p.p, c.maxSteps, c.maxPaths, &f.p), "interp");
    Result r = analyze(c, p, m, c.analysis);
    Result ci = analyze(c, p, m, "ci");

    Text recall, dominance;
    std::size_t nRecall = 0, nDominance = 0;
    require(pfg_check_recall(f.p, r.p, &recall.p, &nRecall), "recall");
    require(pfg_check_dominance(r.p, ci.p, &dominance.p, &nDominance), "dominance");

    if (pfg_facts_exhausted(f.p)) std::cout << "note: interpreter budget exhausted, dynamic facts are partial\n";
    if (nRecall == 0) std::cout << "recall: ok\n";
    else std::cout << "recall: " << nRecall << " violation(s)\n" << recall.str();
    if (nDominance == 0) std::cout << "dominance: ok\n";
    else std::cout << "dominance: " << nDominance << " violation(s)\n" << dominance.str();

    if (!c.report.empty()) {
        Text report;
        require(pfg_result_report_json(r.p, &report.p), "report");
        writeOut(c.report, report.str());
    }
    if (!c.dot.empty()) {
        Text dot;
        require(pfg_result_dot(r.p, &dot.p), "dot");
        writeOut(c.dot, dot.str());
    }
    if (nRecall) return kExitRecall;
    if (nDominance) return kExitDominance;
    return kExitOk;
}

int cmdCompare(const Common& c, const std::vector<std::string>& analyses, const std::string& csvPath) {
    Program p = loadProgram(c);
    Model m = loadModel(c, p);
    std::vector<Result> results;
    std::vector<const pfg_result*> raw;
    std::vector<const char*> names;
    for (const auto& a : analyses) {
        results.push_back(analyze(c, p, m, a));
        raw.push_back(results.back().p);
        names.push_back(a.c_str());
    }
    Text table, csv;
    require(pfg_compare(raw.data(), names.data(), raw.size(), &table.p, &csv.p), "compare");
    std::cout << table.str();
    if (!csvPath.empty()) writeOut(csvPath, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pointer analysis with cut and shortcut edges"};
    app.require_subcommand(1);
    Common c;

    auto* analyzeCmd = app.add_subcommand("analyze", "run one analysis and write its report");
    addProgramOptions(analyzeCmd, c);
    addAnalysisOptions(analyzeCmd, c);
    analyzeCmd->add_option("--report", c.report, "report path (default stdout)");
    analyzeCmd->add_option("--dot", c.dot, "pointer flow graph in DOT");

    auto* interpCmd = app.add_subcommand("interp", "explore executions and print dynamic facts");
    addProgramOptions(interpCmd, c);
    addBudgetOptions(interpCmd, c);
    interpCmd->add_option("--report", c.report, "facts path (default stdout)");

    auto* checkCmd = app.add_subcommand("check", "recall against the interpreter, dominance against ci");
    addProgramOptions(checkCmd, c);
    addAnalysisOptions(checkCmd, c);
    addBudgetOptions(checkCmd, c);
    checkCmd->add_option("--report", c.report, "report path for the checked analysis");
    checkCmd->add_option("--dot", c.dot, "pointer flow graph in DOT");

    std::vector<std::string> analyses{"ci", "csc"};
    std::string csvPath;
    auto* compareCmd = app.add_subcommand("compare", "metrics table across analyses");
    addProgramOptions(compareCmd, c);
    addAnalysisOptions(compareCmd, c);
    compareCmd->add_option("--analyses", analyses, "analyses to compare, first is the reference")->delimiter(',');
    compareCmd->add_option("--csv", csvPath, "also write the table as CSV");

    pfg_stress_spec spec;
    pfg_stress_spec_init(&spec);
    std::string genOut;
    auto* genCmd = app.add_subcommand("gen", "generate a stress program");
    genCmd->add_option("--seed", spec.seed, "generator seed");
    genCmd->add_option("--containers", spec.containers)->check(CLI::NonNegativeNumber);
    genCmd->add_option("--wrappers", spec.field_wrappers)->check(CLI::NonNegativeNumber);
    genCmd->add_option("--local-flows", spec.local_flows)->check(CLI::NonNegativeNumber);
    genCmd->add_option("--depth", spec.depth, "constructor chain depth")->check(CLI::NonNegativeNumber);
    genCmd->add_option("--workers", spec.workers)->check(CLI::NonNegativeNumber);
    genCmd->add_option("--chain", spec.worker_chain, "local copies per worker")->check(CLI::NonNegativeNumber);
    genCmd->add_option("-o,--output", genOut, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*analyzeCmd) return cmdAnalyze(c);
        if (*interpCmd) return cmdInterp(c);
        if (*checkCmd) return cmdCheck(c);
        if (*compareCmd) return cmdCompare(c, analyses, csvPath);
        if (*genCmd) {
            Text text;
            require(pfg_generate(&spec, &text.p), "gen");
            writeOut(genOut, text.str());
            return kExitOk;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitInput;
    }
    return kExitInput;
}

#include "pfg/pfg.h"

#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "pfg/clients.hpp"
#include "pfg/ctxsens.hpp"
#include "pfg/cutshortcut.hpp"
#include "pfg/interp.hpp"
#include "pfg/stress.hpp"

struct pfg_program {
    std::unique_ptr<pfg::ir::Program> program;
    mutable std::unique_ptr<pfg::ProgramIndex> index;
};

struct pfg_model {
    pfg::csc::ContainerModel model;
};

struct pfg_result {
    pfg::AnalysisResult result;
    pfg::clients::Metrics metrics;
    bool timedOut = false;
};

struct pfg_facts {
    pfg::interp::DynamicFacts facts;
};

namespace {

thread_local std::string lastError;

pfg_status fail(pfg_status s, std::string message) {
    lastError = std::move(message);
    return s;
}

pfg_status statusOf(pfg::ErrorKind k) {
    switch (k) {
        case pfg::ErrorKind::Syntax: return PFG_ERR_SYNTAX;
        case pfg::ErrorKind::DuplicateLabel: return PFG_ERR_DUPLICATE_LABEL;
        case pfg::ErrorKind::Unresolved: return PFG_ERR_UNRESOLVED;
        case pfg::ErrorKind::Model: return PFG_ERR_MODEL;
        case pfg::ErrorKind::Usage: return PFG_ERR_USAGE;
        case pfg::ErrorKind::Io: return PFG_ERR_IO;
    }
    return PFG_ERR_INTERNAL;
}

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
pfg_status guarded(F&& f) {
    try {
        lastError.clear();
        return f();
    } catch (const pfg::Error& e) {
        return fail(statusOf(e.kind()), e.what());
    } catch (const CheckFailed& e) {
        return fail(PFG_ERR_CHECK, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PFG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PFG_ERR_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string readFile(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pfg::Error(pfg::ErrorKind::Io, std::string("cannot read ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string joinLines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

// Checks the program and returns its index, building it on first use.
const pfg::ProgramIndex& indexOf(const pfg_program* p) {
    if (!p->index) {
        auto diags = pfg::ir::checkProgram(*p->program);
        if (!diags.empty()) {
            throw CheckFailed(diags.front().where + ": " + diags.front().message);
        }
        p->index = std::make_unique<pfg::ProgramIndex>(*p->program);
    }
    return *p->index;
}

struct AnalysisSpec {
    enum { CI, CSC, KCFA, KOBJ } kind = CSC;
    int k = 0;
};

AnalysisSpec parseAnalysis(const char* text) {
    std::string_view s = text ? text : "csc";
    AnalysisSpec a;
    if (s == "ci") return {AnalysisSpec::CI, 0};
    if (s == "csc") return a;
    auto colon = s.find(':');
    if (colon != std::string_view::npos) {
        auto head = s.substr(0, colon);
        auto tail = s.substr(colon + 1);
        int k = -1;
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
        if (ec == std::errc() && ptr == tail.data() + tail.size() && k >= 0 && k <= 8) {
            if (head == "kcfa") return {AnalysisSpec::KCFA, k};
            if (head == "kobj") return {AnalysisSpec::KOBJ, k};
        }
    }
    throw pfg::Error(pfg::ErrorKind::Usage, "unknown analysis '" + std::string(s) + "' (ci, csc, kcfa:K, kobj:K)");
}

}  // namespace

extern "C" {

const char* pfg_last_error(void) { return lastError.c_str(); }

const char* pfg_status_name(pfg_status status) {
    switch (status) {
        case PFG_OK: return "ok";
        case PFG_ERR_SYNTAX: return "syntax error";
        case PFG_ERR_DUPLICATE_LABEL: return "duplicate label";
        case PFG_ERR_UNRESOLVED: return "unresolved name";
        case PFG_ERR_CHECK: return "check failed";
        case PFG_ERR_MODEL: return "bad container model";
        case PFG_ERR_USAGE: return "usage error";
        case PFG_ERR_IO: return "i/o error";
        case PFG_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PFG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void pfg_string_free(char* s) { std::free(s); }

pfg_status pfg_program_parse(const char* text, pfg_program** out) {
    if (!text || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto p = std::make_unique<pfg_program>();
        p->program = std::make_unique<pfg::ir::Program>(pfg::ir::parseProgram(text));
        *out = p.release();
        return PFG_OK;
    });
}

pfg_status pfg_program_load_file(const char* path, pfg_program** out) {
    if (!path || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string text = readFile(path);
        auto p = std::make_unique<pfg_program>();
        try {
            p->program = std::make_unique<pfg::ir::Program>(pfg::ir::parseProgram(text));
        } catch (const pfg::Error& e) {
            throw pfg::Error(e.kind(), std::string(path) + ":" + e.what());
        }
        *out = p.release();
        return PFG_OK;
    });
}

pfg_status pfg_program_set_entry(pfg_program* program, const char* entry) {
    if (!program || !entry) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    program->program->entry = entry;
    program->index.reset();
    return PFG_OK;
}

pfg_status pfg_program_check(const pfg_program* program, char** diagnostics) {
    if (!program) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto diags = pfg::ir::checkProgram(*program->program);
        std::vector<std::string> lines;
        for (const auto& d : diags) lines.push_back(d.where + ": " + d.message);
        if (diagnostics) *diagnostics = dup(joinLines(lines));
        if (diags.empty()) return PFG_OK;
        return fail(PFG_ERR_CHECK, lines.front());
    });
}

pfg_status pfg_program_print(const pfg_program* program, char** out) {
    if (!program || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup(pfg::ir::printProgram(*program->program));
        return PFG_OK;
    });
}

void pfg_program_free(pfg_program* program) { delete program; }

pfg_status pfg_model_load(const pfg_program* program, const char* json, pfg_model** out) {
    if (!program || !json || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto m = std::make_unique<pfg_model>();
        m->model = pfg::csc::loadContainerModel(json, *program->program);
        *out = m.release();
        return PFG_OK;
    });
}

pfg_status pfg_model_load_file(const pfg_program* program, const char* path, pfg_model** out) {
    if (!program || !path || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string text = readFile(path);
        return pfg_model_load(program, text.c_str(), out);
    });
}

pfg_status pfg_model_warnings(const pfg_model* model, char** out) {
    if (!model || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup(joinLines(model->model.warnings));
        return PFG_OK;
    });
}

void pfg_model_free(pfg_model* model) { delete model; }

pfg_status pfg_parse_patterns(const char* text, int* out) {
    if (!text || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = static_cast<int>(pfg::csc::parsePatterns(text));
        return PFG_OK;
    });
}

void pfg_options_init(pfg_options* options) {
    if (!options) return;
    options->analysis = "csc";
    options->patterns = PFG_PATTERN_DEFAULT;
    options->load_handling = 1;
    options->drop_shortcut = -1;
    options->time_budget_ms = 0;
}

pfg_status pfg_analyze(const pfg_program* program, const pfg_model* model, const pfg_options* options,
                       pfg_result** out) {
    if (!program || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        pfg_options opts;
        pfg_options_init(&opts);
        if (options) opts = *options;
        const AnalysisSpec spec = parseAnalysis(opts.analysis);
        const pfg::ProgramIndex& index = indexOf(program);
        auto r = std::make_unique<pfg_result>();
        if (spec.kind == AnalysisSpec::CI) {
            r->result = pfg::solveCI(index);
        } else if (spec.kind == AnalysisSpec::CSC) {
            pfg::csc::Options o;
            if (opts.patterns == PFG_PATTERN_DEFAULT) {
                o.patterns = model ? pfg::csc::kAllPatterns : pfg::csc::kAllPatterns & ~pfg::csc::kContainerPattern;
            } else {
                if (opts.patterns < 0 || opts.patterns > PFG_PATTERN_ALL) {
                    throw pfg::Error(pfg::ErrorKind::Usage, "bad pattern mask");
                }
                o.patterns = static_cast<unsigned>(opts.patterns);
                if ((o.patterns & pfg::csc::kContainerPattern) && !model) {
                    throw pfg::Error(pfg::ErrorKind::Usage, "the container pattern needs a container model");
                }
            }
            o.model = model ? &model->model : nullptr;
            o.loadHandling = opts.load_handling != 0;
            o.dropShortcut = opts.drop_shortcut;
            r->result = pfg::csc::solveCSC(index, o);
        } else {
            pfg::ctx::Limits limits;
            if (opts.time_budget_ms > 0) limits.timeBudget = std::chrono::milliseconds(opts.time_budget_ms);
            auto flavor = spec.kind == AnalysisSpec::KCFA ? pfg::ctx::Flavor::CallSite : pfg::ctx::Flavor::Object;
            auto cs = pfg::ctx::solveContextSensitive(index, flavor, spec.k, limits);
            r->timedOut = cs.timedOut;
            r->result = pfg::ctx::projectToCI(cs);
        }
        r->metrics = pfg::clients::computeMetrics(index, r->result);
        *out = r.release();
        return PFG_OK;
    });
}

pfg_status pfg_result_report_json(const pfg_result* result, char** out) {
    if (!result || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup(pfg::clients::reportJson(result->result, result->metrics, result->timedOut));
        return PFG_OK;
    });
}

pfg_status pfg_result_dot(const pfg_result* result, char** out) {
    if (!result || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup(pfg::exportDot(result->result));
        return PFG_OK;
    });
}

int pfg_result_timed_out(const pfg_result* result) { return result && result->timedOut ? 1 : 0; }

void pfg_result_free(pfg_result* result) { delete result; }

pfg_status pfg_explore(const pfg_program* program, size_t max_steps, size_t max_paths, pfg_facts** out) {
    if (!program || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    if (max_steps == 0 || max_paths == 0) return fail(PFG_ERR_USAGE, "budgets must be positive");
    return guarded([&] {
        auto f = std::make_unique<pfg_facts>();
        f->facts = pfg::interp::explore(indexOf(program), {max_steps, max_paths});
        *out = f.release();
        return PFG_OK;
    });
}

pfg_status pfg_facts_json(const pfg_facts* facts, char** out) {
    if (!facts || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup(pfg::interp::factsJson(facts->facts));
        return PFG_OK;
    });
}

int pfg_facts_exhausted(const pfg_facts* facts) { return facts && facts->facts.exhausted ? 1 : 0; }

void pfg_facts_free(pfg_facts* facts) { delete facts; }

pfg_status pfg_check_recall(const pfg_facts* facts, const pfg_result* result, char** violations, size_t* count) {
    if (!facts || !result) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto v = pfg::interp::checkRecall(facts->facts, result->result);
        if (count) *count = v.size();
        if (violations) *violations = dup(joinLines(v));
        return PFG_OK;
    });
}

pfg_status pfg_check_dominance(const pfg_result* result, const pfg_result* baseline, char** violations,
                               size_t* count) {
    if (!result || !baseline) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto v = pfg::clients::checkDominance(result->result, baseline->result);
        if (count) *count = v.size();
        if (violations) *violations = dup(joinLines(v));
        return PFG_OK;
    });
}

pfg_status pfg_compare(const pfg_result* const* results, const char* const* names, size_t n, char** table,
                       char** csv) {
    if ((n > 0 && (!results || !names)) || (!table && !csv)) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<std::pair<std::string, pfg::clients::Metrics>> rows;
        for (size_t i = 0; i < n; ++i) {
            if (!results[i] || !names[i]) return fail(PFG_ERR_INVALID_ARGUMENT, "null row");
            rows.emplace_back(names[i], results[i]->metrics);
        }
        auto c = pfg::clients::compareMetrics(std::move(rows));
        if (table) *table = dup(pfg::clients::renderTable(c));
        if (csv) *csv = dup(pfg::clients::renderCsv(c));
        return PFG_OK;
    });
}

void pfg_stress_spec_init(pfg_stress_spec* spec) {
    if (!spec) return;
    pfg::stress::StressSpec d;
    spec->seed = d.seed;
    spec->containers = d.nContainers;
    spec->field_wrappers = d.nFieldWrappers;
    spec->local_flows = d.nLocalFlows;
    spec->depth = d.depth;
    spec->workers = d.nWorkers;
    spec->worker_chain = d.workerChain;
}

pfg_status pfg_generate(const pfg_stress_spec* spec, char** out) {
    if (!spec || !out) return fail(PFG_ERR_INVALID_ARGUMENT, "null argument");
    if (spec->containers < 0 || spec->field_wrappers < 0 || spec->local_flows < 0 || spec->depth < 0 ||
        spec->workers < 0 || spec->worker_chain < 0) {
        return fail(PFG_ERR_USAGE, "counts must be non-negative");
    }
    return guarded([&] {
        pfg::stress::StressSpec s;
        s.seed = spec->seed;
        s.nContainers = spec->containers;
        s.nFieldWrappers = spec->field_wrappers;
        s.nLocalFlows = spec->local_flows;
        s.depth = spec->depth;
        s.nWorkers = spec->workers;
        s.workerChain = spec->worker_chain;
        *out = dup(pfg::stress::generate(s));
        return PFG_OK;
    });
}

}  // extern "C"

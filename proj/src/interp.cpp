#include "pfg/interp.hpp"

#include <json.hpp>

namespace pfg::interp {

namespace {

constexpr int kNull = -1;

struct Obj {
    ObjId site;
    std::vector<std::pair<FieldId, int>> fields;

    int get(FieldId f) const {
        for (const auto& [k, v] : fields) {
            if (k == f) return v;
        }
        return kNull;
    }
    void set(FieldId f, int v) {
        for (auto& [k, old] : fields) {
            if (k == f) {
                old = v;
                return;
            }
        }
        fields.emplace_back(f, v);
    }
};

struct Frame {
    MethodId method;
    std::uint32_t pc = 0;
    std::vector<int> vars;
    std::optional<VarId> retTo;  // caller variable receiving the result
};

struct State {
    std::vector<Obj> heap;
    std::vector<Frame> frames;
    std::size_t steps = 0;
};

// Per-method jump tables.
struct Layout {
    std::vector<std::map<std::string, std::uint32_t>> marks;
};

class Explorer {
public:
    Explorer(const ProgramIndex& index, const Budget& budget) : index_(index), budget_(budget) {
        layout_.marks.resize(index.methods().size());
        for (MethodId m = 0; m < index.methods().size(); ++m) {
            const auto& body = index.method(m).def->body;
            for (std::uint32_t i = 0; i < body.size(); ++i) {
                if (body[i].mark) layout_.marks[m][*body[i].mark] = i;
            }
        }
    }

    DynamicFacts run() {
        State init;
        enter(init, index_.entry(), std::nullopt);
        std::vector<State> stack{std::move(init)};
        while (!stack.empty()) {
            if (facts_.paths >= budget_.maxPaths) {
                facts_.exhausted = true;
                break;
            }
            State s = std::move(stack.back());
            stack.pop_back();
            runPath(s, stack);
            ++facts_.paths;
        }
        return std::move(facts_);
    }

private:
    void enter(State& s, MethodId m, std::optional<VarId> retTo) {
        const auto& info = index_.method(m);
        facts_.reachMethods.insert(info.qname);
        s.frames.push_back({m, 0, std::vector<int>(info.vars.size(), kNull), retTo});
    }

    void assign(State& s, VarId v, int value) {
        Frame& f = s.frames.back();
        f.vars[v] = value;
        if (value != kNull) {
            const auto& info = index_.method(f.method);
            facts_.varPointsTo[info.qname + "/" + info.vars[v]].insert(index_.site(s.heap[value].site).label);
        }
    }

    void leave(State& s, int value) {
        std::optional<VarId> to = s.frames.back().retTo;
        s.frames.pop_back();
        if (!s.frames.empty() && to) assign(s, *to, value);
    }

    // Runs one path to completion, queueing the other side of each fork.
    void runPath(State& s, std::vector<State>& stack) {
        while (!s.frames.empty()) {
            if (++s.steps > budget_.maxStepsPerPath) {
                facts_.exhausted = true;
                return;
            }
            Frame& fr = s.frames.back();
            const auto& info = index_.method(fr.method);
            const auto& body = info.def->body;
            if (fr.pc >= body.size()) {
                leave(s, kNull);
                continue;
            }
            const ir::Stmt& st = body[fr.pc++];
            if (const auto* n = st.as<ir::New>()) {
                s.heap.push_back({*index_.siteId(st.label), {}});
                assign(s, info.var(n->lhs), static_cast<int>(s.heap.size() - 1));
            } else if (const auto* a = st.as<ir::Assign>()) {
                assign(s, info.var(a->lhs), fr.vars[info.var(a->rhs)]);
            } else if (const auto* an = st.as<ir::AssignNull>()) {
                assign(s, info.var(an->lhs), kNull);
            } else if (const auto* c = st.as<ir::Cast>()) {
                const int v = fr.vars[info.var(c->rhs)];
                bool ok = true;
                if (v != kNull) {
                    auto target = index_.typeId(c->type);
                    ok = target && index_.subtype(index_.site(s.heap[v].site).type, *target);
                }
                auto it = facts_.castOutcomes.emplace(st.label, CastOutcome::AlwaysOk).first;
                if (!ok) {
                    it->second = CastOutcome::MayFail;
                    return;
                }
                assign(s, info.var(c->lhs), v);
            } else if (const auto* stor = st.as<ir::Store>()) {
                const int base = fr.vars[info.var(stor->base)];
                if (base == kNull) return nullDeref();
                const int v = fr.vars[info.var(stor->rhs)];
                const FieldId f = index_.fieldId(stor->field);
                s.heap[base].set(f, v);
                if (v != kNull) {
                    facts_.fieldPointsTo[index_.site(s.heap[base].site).label + "." + stor->field].insert(
                        index_.site(s.heap[v].site).label);
                }
            } else if (const auto* ld = st.as<ir::Load>()) {
                const int base = fr.vars[info.var(ld->base)];
                if (base == kNull) return nullDeref();
                assign(s, info.var(ld->lhs), s.heap[base].get(index_.fieldId(ld->field)));
            } else if (const auto* inv = st.as<ir::Invoke>()) {
                std::optional<MethodId> callee;
                int recv = kNull;
                if (inv->kind == ir::InvokeKind::Static) {
                    callee = index_.methodId(inv->receiver + "." + inv->method);
                } else {
                    recv = fr.vars[info.var(inv->receiver)];
                    if (recv == kNull) return nullDeref();
                    callee = index_.dispatch(index_.site(s.heap[recv].site).type, inv->method);
                }
                if (!callee) return;
                const auto& target = index_.method(*callee);
                if (target.def->arity() != static_cast<int>(inv->args.size())) return;
                if (inv->kind == ir::InvokeKind::Virtual && target.def->isStatic) return;
                std::vector<int> args;
                for (const auto& a : inv->args) args.push_back(fr.vars[info.var(a)]);
                std::optional<VarId> retTo;
                if (inv->lhs) retTo = info.var(*inv->lhs);
                facts_.callEdges.emplace(st.label, target.qname);
                enter(s, *callee, retTo);
                if (recv != kNull) assign(s, *target.paramVar(0), recv);
                for (std::size_t k = 0; k < args.size(); ++k) {
                    assign(s, *target.paramVar(static_cast<int>(k) + 1), args[k]);
                }
            } else if (const auto* r = st.as<ir::Return>()) {
                leave(s, r->var ? fr.vars[info.var(*r->var)] : kNull);
            } else if (const auto* b = st.as<ir::BranchNondet>()) {
                State other = s;
                other.frames.back().pc = layout_.marks[fr.method].at(b->target);
                stack.push_back(std::move(other));
            } else if (const auto* g = st.as<ir::Goto>()) {
                fr.pc = layout_.marks[fr.method].at(g->target);
            }
        }
    }

    void nullDeref() { ++facts_.nullDerefs; }

    const ProgramIndex& index_;
    Budget budget_;
    Layout layout_;
    DynamicFacts facts_;
};

}  // namespace

DynamicFacts explore(const ProgramIndex& index, const Budget& budget) { return Explorer(index, budget).run(); }

std::string factsJson(const DynamicFacts& facts) {
    nlohmann::ordered_json j;
    j["callEdges"] = nlohmann::json::array();
    for (const auto& [site, callee] : facts.callEdges) j["callEdges"].push_back({site, callee});
    j["castOutcomes"] = nlohmann::json::object();
    for (const auto& [label, o] : facts.castOutcomes) {
        j["castOutcomes"][label] = o == CastOutcome::AlwaysOk ? "alwaysOk" : "mayFail";
    }
    j["exhausted"] = facts.exhausted;
    j["fieldPointsTo"] = facts.fieldPointsTo;
    j["nullDerefs"] = facts.nullDerefs;
    j["paths"] = facts.paths;
    j["reachMethods"] = facts.reachMethods;
    j["varPointsTo"] = facts.varPointsTo;
    return j.dump(2) + "\n";
}

std::vector<std::string> checkRecall(const DynamicFacts& facts, const AnalysisResult& result) {
    std::vector<std::string> out;
    for (const auto& m : facts.reachMethods) {
        if (!result.reachable.count(m)) out.push_back("missing reachable method " + m);
    }
    for (const auto& e : facts.callEdges) {
        if (!result.callGraph.count(e)) out.push_back("missing call edge " + e.first + " -> " + e.second);
    }
    auto covers = [&](const std::map<std::string, std::set<std::string>>& dyn) {
        for (const auto& [p, objs] : dyn) {
            const auto& st = result.ptOf(p);
            for (const auto& o : objs) {
                if (!st.count(o)) out.push_back("missing points-to " + p + " -> " + o);
            }
        }
    };
    covers(facts.varPointsTo);
    covers(facts.fieldPointsTo);
    return out;
}

}  // namespace pfg::interp

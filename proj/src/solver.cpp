#include "pfg/solver.hpp"

#include <algorithm>

namespace pfg {

namespace {

std::uint64_t packKey(const PointerKey& k) {
    return (static_cast<std::uint64_t>(k.isField) << 63) | (static_cast<std::uint64_t>(k.a) << 32) | k.b;
}

std::uint64_t packEdge(PointerId s, PointerId t, EdgeKind kind) {
    // Pointer ids stay far below 2^29 for anything the solver can finish.
    return (static_cast<std::uint64_t>(s) << 32) | (static_cast<std::uint64_t>(t) << 3) |
           static_cast<std::uint64_t>(kind);
}

}  // namespace

std::string_view edgeKindName(EdgeKind k) {
    switch (k) {
        case EdgeKind::Assign: return "assign";
        case EdgeKind::Store: return "store";
        case EdgeKind::Load: return "load";
        case EdgeKind::Param: return "param";
        case EdgeKind::Return: return "return";
        case EdgeKind::Shortcut: return "shortcut";
    }
    return "?";
}

bool PointsToSet::contains(ObjId o) const { return std::binary_search(elems_.begin(), elems_.end(), o); }

bool PointsToSet::insert(ObjId o) {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), o);
    if (it != elems_.end() && *it == o) return false;
    elems_.insert(it, o);
    return true;
}

std::vector<ObjId> PointsToSet::addAll(const std::vector<ObjId>& objs) {
    std::vector<ObjId> added;
    for (ObjId o : objs) {
        if (!contains(o)) added.push_back(o);
    }
    if (added.empty()) return added;
    std::sort(added.begin(), added.end());
    added.erase(std::unique(added.begin(), added.end()), added.end());
    std::vector<ObjId> merged;
    merged.reserve(elems_.size() + added.size());
    std::merge(elems_.begin(), elems_.end(), added.begin(), added.end(), std::back_inserter(merged));
    elems_ = std::move(merged);
    return added;
}

const std::set<std::string>& AnalysisResult::ptOf(const std::string& pointer) const {
    static const std::set<std::string> none;
    auto it = pt.find(pointer);
    return it == pt.end() ? none : it->second;
}

Solver::Solver(const ProgramIndex& index, EdgePolicy& policy)
    : index_(index), policy_(policy), reachable_(index.methods().size(), false) {}

PointerId Solver::varPtr(MethodId m, VarId v) {
    PointerKey k{false, m, v};
    auto [it, fresh] = keyIds_.emplace(packKey(k), static_cast<PointerId>(keys_.size()));
    if (fresh) {
        keys_.push_back(k);
        pt_.emplace_back();
        succ_.emplace_back();
    }
    return it->second;
}

PointerId Solver::fieldPtr(ObjId o, FieldId f) {
    PointerKey k{true, o, f};
    auto [it, fresh] = keyIds_.emplace(packKey(k), static_cast<PointerId>(keys_.size()));
    if (fresh) {
        keys_.push_back(k);
        pt_.emplace_back();
        succ_.emplace_back();
    }
    return it->second;
}

std::string Solver::pointerName(PointerId p) const {
    const PointerKey& k = keys_[p];
    if (k.isField) return index_.site(k.a).label + "." + index_.fieldName(k.b);
    const auto& m = index_.method(k.a);
    return m.qname + "/" + m.vars[k.b];
}

const ir::Invoke& Solver::invokeAt(const CallSite& cs) const {
    return std::get<ir::Invoke>(index_.method(cs.caller).def->body[cs.stmt].body);
}

std::optional<VarId> Solver::argVar(const CallSite& cs, int k) const {
    auto name = invokeAt(cs).argAt(k);
    if (!name) return std::nullopt;
    return index_.method(cs.caller).var(*name);
}

std::optional<VarId> Solver::lhsVar(const CallSite& cs) const {
    const auto& inv = invokeAt(cs);
    if (!inv.lhs) return std::nullopt;
    return index_.method(cs.caller).var(*inv.lhs);
}

void Solver::push(PointerId p, const std::vector<ObjId>& objs) {
    if (!objs.empty()) worklist_.emplace_back(p, objs);
}

bool Solver::addEdge(PointerId s, PointerId t, EdgeKind kind, std::string provenance) {
    if (!edgeSet_.insert(packEdge(s, t, kind)).second) return false;
    succ_[s].push_back(t);
    edges_.push_back({s, t, kind, std::move(provenance)});
    if (!pt_[s].empty()) push(t, pt_[s].elems());
    policy_.onEdgeAdded(s, t, kind);
    return true;
}

void Solver::logCut(PointerId s, PointerId t, EdgeKind kind, std::string rule) {
    if (cutSet_.emplace(s, t, static_cast<int>(kind)).second) cuts_.emplace_back(s, t, kind, std::move(rule));
}

void Solver::addReachable(MethodId m) {
    if (reachable_[m]) return;
    reachable_[m] = true;
    pendingMethods_.push_back(m);
    policy_.onMethodReachable(m);
}

void Solver::processMethod(MethodId mid) {
    const auto& info = index_.method(mid);
    const auto& body = info.def->body;
    std::vector<PointerId> touched;
    for (std::uint32_t i = 0; i < body.size(); ++i) {
        const ir::Stmt& s = body[i];
        if (const auto* n = s.as<ir::New>()) {
            push(varPtr(mid, info.var(n->lhs)), {*index_.siteId(s.label)});
        } else if (const auto* a = s.as<ir::Assign>()) {
            addEdge(varPtr(mid, info.var(a->rhs)), varPtr(mid, info.var(a->lhs)), EdgeKind::Assign, s.label);
        } else if (const auto* c = s.as<ir::Cast>()) {
            addEdge(varPtr(mid, info.var(c->rhs)), varPtr(mid, info.var(c->lhs)), EdgeKind::Assign, s.label);
        } else if (const auto* st = s.as<ir::Store>()) {
            PointerId b = varPtr(mid, info.var(st->base));
            uses_[b].stores.push_back(i);
            touched.push_back(b);
        } else if (const auto* ld = s.as<ir::Load>()) {
            PointerId b = varPtr(mid, info.var(ld->base));
            uses_[b].loads.push_back(i);
            touched.push_back(b);
        } else if (const auto* inv = s.as<ir::Invoke>()) {
            if (inv->kind == ir::InvokeKind::Static) {
                auto callee = index_.methodId(inv->receiver + "." + inv->method);
                if (!callee) {
                    if (diagSeen_.insert(s.label).second) {
                        diagnostics_.push_back({s.label, "unresolved static call " + inv->receiver + "." + inv->method});
                    }
                    continue;
                }
                addCallEdge({mid, i}, *callee, std::nullopt);
            } else {
                PointerId r = varPtr(mid, info.var(inv->receiver));
                uses_[r].invokes.push_back(i);
                touched.push_back(r);
            }
        }
    }
    // Bases that already carry objects (only possible through policy edges)
    // need the new uses applied to what they hold.
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (PointerId p : touched) {
        if (pt_[p].empty()) continue;
        const VarUses uses = uses_[p];
        const std::vector<ObjId> all = pt_[p].elems();
        applyUses(p, uses, all);
    }
}

void Solver::addCallEdge(const CallSite& cs, MethodId callee, std::optional<ObjId> recv) {
    const auto& target = index_.method(callee);
    if (recv) {
        if (auto thisVar = target.paramVar(0)) push(varPtr(callee, *thisVar), {*recv});
    }
    if (!callEdgeSet_.emplace(cs, callee).second) return;
    callEdgeList_.emplace_back(cs, callee);
    addReachable(callee);
    const auto& caller = index_.method(cs.caller);
    const ir::Stmt& stmt = caller.def->body[cs.stmt];
    const auto& inv = std::get<ir::Invoke>(stmt.body);
    const int n = std::min<int>(static_cast<int>(inv.args.size()), target.def->arity());
    for (int k = 1; k <= n; ++k) {
        addEdge(varPtr(cs.caller, caller.var(inv.args[k - 1])), varPtr(callee, *target.paramVar(k)),
                EdgeKind::Param, stmt.label);
    }
    if (inv.lhs && target.retVar) {
        PointerId ret = varPtr(callee, *target.retVar);
        PointerId lhs = varPtr(cs.caller, caller.var(*inv.lhs));
        if (policy_.cutsReturn(callee)) {
            logCut(ret, lhs, EdgeKind::Return, policy_.cutRule(callee));
        } else {
            addEdge(ret, lhs, EdgeKind::Return, stmt.label);
        }
    }
    policy_.onCallEdge(cs, callee);
}

void Solver::propagate(PointerId p, const std::vector<ObjId>& objs) {
    std::vector<ObjId> delta = pt_[p].addAll(objs);
    if (delta.empty()) return;
    policy_.onPointsToDelta(p, delta);
    for (std::size_t i = 0; i < succ_[p].size(); ++i) push(succ_[p][i], delta);

    if (keys_[p].isField) return;
    auto it = uses_.find(p);
    if (it == uses_.end()) return;
    // Copy: the handlers may intern pointers and grow uses_.
    const VarUses uses = it->second;
    applyUses(p, uses, delta);
}

void Solver::applyUses(PointerId p, const VarUses& uses, const std::vector<ObjId>& delta) {
    const MethodId mid = keys_[p].a;
    const auto& info = index_.method(mid);
    const auto& body = info.def->body;
    for (std::uint32_t si : uses.stores) {
        const auto& st = std::get<ir::Store>(body[si].body);
        const FieldId f = index_.fieldId(st.field);
        const PointerId rhs = varPtr(mid, info.var(st.rhs));
        const bool cut = policy_.cutsStore(mid, si);
        for (ObjId o : delta) {
            const PointerId target = fieldPtr(o, f);
            if (cut) {
                logCut(rhs, target, EdgeKind::Store, "CUTSTORE");
            } else {
                addEdge(rhs, target, EdgeKind::Store, body[si].label);
            }
        }
    }
    for (std::uint32_t si : uses.loads) {
        const auto& ld = std::get<ir::Load>(body[si].body);
        const FieldId f = index_.fieldId(ld.field);
        const PointerId lhs = varPtr(mid, info.var(ld.lhs));
        for (ObjId o : delta) addEdge(fieldPtr(o, f), lhs, EdgeKind::Load, body[si].label);
    }
    for (std::uint32_t si : uses.invokes) {
        const auto& inv = std::get<ir::Invoke>(body[si].body);
        for (ObjId o : delta) {
            const auto type = index_.site(o).type;
            auto callee = index_.dispatch(type, inv.method);
            std::string problem;
            if (!callee) {
                problem = "type '" + index_.typeName(type) + "' has no method '" + inv.method + "'";
            } else if (index_.method(*callee).def->isStatic) {
                problem = "dispatch to static method " + index_.method(*callee).qname;
            } else if (index_.method(*callee).def->arity() != static_cast<int>(inv.args.size())) {
                problem = "arity mismatch dispatching to " + index_.method(*callee).qname;
            }
            if (!problem.empty()) {
                if (diagSeen_.insert(body[si].label + "|" + problem).second) {
                    diagnostics_.push_back({body[si].label, "dispatch failure: " + problem});
                }
                continue;
            }
            addCallEdge({mid, si}, *callee, o);
        }
    }
}

void Solver::run() {
    addReachable(index_.entry());
    while (!pendingMethods_.empty() || !worklist_.empty()) {
        if (!pendingMethods_.empty()) {
            MethodId m = pendingMethods_.front();
            pendingMethods_.pop_front();
            processMethod(m);
            continue;
        }
        auto [p, objs] = std::move(worklist_.front());
        worklist_.pop_front();
        propagate(p, objs);
    }
}

AnalysisResult Solver::result() const {
    AnalysisResult r;
    for (PointerId p = 0; p < keys_.size(); ++p) {
        if (pt_[p].empty()) continue;
        auto& set = r.pt[pointerName(p)];
        for (ObjId o : pt_[p].elems()) set.insert(index_.site(o).label);
        r.nodes.insert(pointerName(p));
    }
    for (const auto& e : edges_) {
        PfgEdge pe{pointerName(e.s), pointerName(e.t), e.kind, e.provenance};
        r.nodes.insert(pe.source);
        r.nodes.insert(pe.target);
        if (e.kind == EdgeKind::Shortcut) r.shortcuts.push_back(pe);
        r.edges.push_back(std::move(pe));
    }
    std::sort(r.edges.begin(), r.edges.end());
    std::sort(r.shortcuts.begin(), r.shortcuts.end());
    for (const auto& [s, t, kind, rule] : cuts_) {
        if (edgeSet_.count(packEdge(s, t, kind))) continue;
        r.cutLog.push_back({pointerName(s), pointerName(t), kind, rule});
    }
    std::sort(r.cutLog.begin(), r.cutLog.end());
    for (const auto& [cs, callee] : callEdgeList_) {
        r.callGraph.emplace(index_.method(cs.caller).def->body[cs.stmt].label, index_.method(callee).qname);
    }
    for (MethodId m = 0; m < reachable_.size(); ++m) {
        if (reachable_[m]) r.reachable.insert(index_.method(m).qname);
    }
    r.diagnostics = diagnostics_;
    std::sort(r.diagnostics.begin(), r.diagnostics.end(),
              [](const auto& a, const auto& b) { return std::tie(a.where, a.message) < std::tie(b.where, b.message); });
    return r;
}

AnalysisResult solve(const ProgramIndex& index, EdgePolicy& policy) {
    Solver solver(index, policy);
    policy.attach(solver);
    solver.run();
    AnalysisResult r = solver.result();
    policy.finish(r);
    return r;
}

AnalysisResult solveCI(const ProgramIndex& index) {
    EdgePolicy none;
    return solve(index, none);
}

}  // namespace pfg

#include "pfg/ctxsens.hpp"

#include <algorithm>

namespace pfg::ctx {

namespace {

using CtxId = std::uint32_t;
using CSObjId = std::uint32_t;
using CSMethodId = std::uint32_t;
using CSPtr = std::uint32_t;
using Clock = std::chrono::steady_clock;

template <class Key, class Id = std::uint32_t>
class Interner {
public:
    std::pair<Id, bool> intern(const Key& k) {
        auto [it, fresh] = ids_.emplace(k, static_cast<Id>(items_.size()));
        if (fresh) items_.push_back(k);
        return {it->second, fresh};
    }
    const Key& operator[](Id id) const { return items_[id]; }
    std::size_t size() const { return items_.size(); }

private:
    std::map<Key, Id> ids_;
    std::vector<Key> items_;
};

class CSSolver {
public:
    CSSolver(const ProgramIndex& index, Flavor flavor, int k, const Limits& limits)
        : index_(index), flavor_(flavor), k_(std::max(0, k)), limits_(limits) {
        contexts_.intern({});
    }

    CSResult run() {
        start_ = Clock::now();
        addReachable(index_.entry(), 0);
        std::size_t steps = 0;
        while (!pendingMethods_.empty() || !worklist_.empty()) {
            if (limits_.timeBudget && (++steps & 1023) == 0 && Clock::now() - start_ > *limits_.timeBudget) {
                timedOut_ = true;
                break;
            }
            if (!pendingMethods_.empty()) {
                CSMethodId m = pendingMethods_.front();
                pendingMethods_.pop_front();
                processMethod(m);
                continue;
            }
            auto [p, objs] = std::move(worklist_.front());
            worklist_.pop_front();
            propagate(p, objs);
        }
        return result();
    }

private:
    struct PtrKey {
        bool isField;
        std::uint32_t a;  // cs method | cs object
        std::uint32_t b;  // var | field
        auto operator<=>(const PtrKey&) const = default;
    };
    struct Uses {
        std::vector<std::uint32_t> stores, loads, invokes;
    };

    std::vector<std::uint32_t> truncate(std::vector<std::uint32_t> v, int n) const {
        if (static_cast<int>(v.size()) > n) v.resize(std::max(0, n));
        return v;
    }

    CtxId push_front(std::uint32_t elem, const std::vector<std::uint32_t>& rest, int n) {
        std::vector<std::uint32_t> v{elem};
        v.insert(v.end(), rest.begin(), rest.end());
        return contexts_.intern(truncate(std::move(v), n)).first;
    }

    std::uint32_t callSiteId(MethodId m, std::uint32_t stmt) {
        return callSites_.intern({m, stmt}).first;
    }

    CSPtr varPtr(CSMethodId m, VarId v) { return ptrFor({false, m, v}); }
    CSPtr fieldPtr(CSObjId o, FieldId f) { return ptrFor({true, o, f}); }

    CSPtr ptrFor(const PtrKey& k) {
        auto [id, fresh] = ptrs_.intern(k);
        if (fresh) {
            pt_.emplace_back();
            succ_.emplace_back();
        }
        return id;
    }

    std::pair<std::uint64_t, std::uint64_t> projectedEdgeKey(CSPtr s, CSPtr t) const {
        return {projectedKey(s), projectedKey(t)};
    }

    std::uint64_t projectedKey(CSPtr p) const {
        const auto& k = ptrs_[p];
        if (k.isField) return (1ull << 63) | (static_cast<std::uint64_t>(objs_[k.a].first) << 32) | k.b;
        return (static_cast<std::uint64_t>(methods_[k.a].first) << 32) | k.b;
    }

    void push(CSPtr p, std::vector<CSObjId> objs) {
        if (!objs.empty()) worklist_.emplace_back(p, std::move(objs));
    }

    void addEdge(CSPtr s, CSPtr t, EdgeKind kind) {
        if (!edgeSet_.emplace(s, t, static_cast<int>(kind)).second) return;
        succ_[s].push_back(t);
        auto [ps, pt] = projectedEdgeKey(s, t);
        projected_.emplace(ps, pt, static_cast<int>(kind));
        if (!pt_[s].empty()) push(t, pt_[s].elems());
    }

    void addReachable(MethodId m, CtxId c) {
        const CSMethodId id = methods_.intern({m, c}).first;
        if (processed_.size() <= id) processed_.resize(id + 1, false);
        if (processed_[id]) return;
        processed_[id] = true;
        pendingMethods_.push_back(id);
    }

    CSMethodId csMethod(MethodId m, CtxId c) { return methods_.intern({m, c}).first; }

    void processMethod(CSMethodId csm) {
        const auto [mid, ctx] = methods_[csm];
        const auto& info = index_.method(mid);
        const auto& body = info.def->body;
        for (std::uint32_t i = 0; i < body.size(); ++i) {
            const ir::Stmt& s = body[i];
            if (const auto* n = s.as<ir::New>()) {
                const CtxId heap = contexts_.intern(truncate(contexts_[ctx], k_ - 1)).first;
                const CSObjId o = objs_.intern({*index_.siteId(s.label), heap}).first;
                push(varPtr(csm, info.var(n->lhs)), {o});
            } else if (const auto* a = s.as<ir::Assign>()) {
                addEdge(varPtr(csm, info.var(a->rhs)), varPtr(csm, info.var(a->lhs)), EdgeKind::Assign);
            } else if (const auto* c = s.as<ir::Cast>()) {
                addEdge(varPtr(csm, info.var(c->rhs)), varPtr(csm, info.var(c->lhs)), EdgeKind::Assign);
            } else if (const auto* st = s.as<ir::Store>()) {
                uses_[varPtr(csm, info.var(st->base))].stores.push_back(i);
            } else if (const auto* ld = s.as<ir::Load>()) {
                uses_[varPtr(csm, info.var(ld->base))].loads.push_back(i);
            } else if (const auto* inv = s.as<ir::Invoke>()) {
                if (inv->kind == ir::InvokeKind::Static) {
                    auto callee = index_.methodId(inv->receiver + "." + inv->method);
                    if (!callee) continue;
                    CtxId cc = flavor_ == Flavor::CallSite ? push_front(callSiteId(mid, i), contexts_[ctx], k_) : ctx;
                    addCallEdge(csm, i, csMethod(*callee, cc), std::nullopt);
                } else {
                    uses_[varPtr(csm, info.var(inv->receiver))].invokes.push_back(i);
                }
            }
        }
    }

    void addCallEdge(CSMethodId caller, std::uint32_t stmt, CSMethodId callee, std::optional<CSObjId> recv) {
        const auto [calleeMid, calleeCtx] = methods_[callee];
        const auto& target = index_.method(calleeMid);
        if (recv) {
            if (auto thisVar = target.paramVar(0)) push(varPtr(callee, *thisVar), {*recv});
        }
        if (!callEdges_.emplace(caller, stmt, callee).second) return;
        addReachable(calleeMid, calleeCtx);
        const auto& info = index_.method(methods_[caller].first);
        const auto& inv = std::get<ir::Invoke>(info.def->body[stmt].body);
        const int n = std::min<int>(static_cast<int>(inv.args.size()), target.def->arity());
        for (int k = 1; k <= n; ++k) {
            addEdge(varPtr(caller, info.var(inv.args[k - 1])), varPtr(callee, *target.paramVar(k)), EdgeKind::Param);
        }
        if (inv.lhs && target.retVar) {
            addEdge(varPtr(callee, *target.retVar), varPtr(caller, info.var(*inv.lhs)), EdgeKind::Return);
        }
    }

    void propagate(CSPtr p, const std::vector<CSObjId>& objs) {
        std::vector<CSObjId> delta = pt_[p].addAll(objs);
        if (delta.empty()) return;
        for (std::size_t i = 0; i < succ_[p].size(); ++i) push(succ_[p][i], delta);
        const PtrKey key = ptrs_[p];
        if (key.isField) return;
        auto it = uses_.find(p);
        if (it == uses_.end()) return;
        const Uses uses = it->second;
        const CSMethodId csm = key.a;
        const auto [mid, ctx] = methods_[csm];
        const auto& info = index_.method(mid);
        const auto& body = info.def->body;
        for (std::uint32_t si : uses.stores) {
            const auto& st = std::get<ir::Store>(body[si].body);
            const FieldId f = index_.fieldId(st.field);
            const CSPtr rhs = varPtr(csm, info.var(st.rhs));
            for (CSObjId o : delta) addEdge(rhs, fieldPtr(o, f), EdgeKind::Store);
        }
        for (std::uint32_t si : uses.loads) {
            const auto& ld = std::get<ir::Load>(body[si].body);
            const FieldId f = index_.fieldId(ld.field);
            const CSPtr lhs = varPtr(csm, info.var(ld.lhs));
            for (CSObjId o : delta) addEdge(fieldPtr(o, f), lhs, EdgeKind::Load);
        }
        for (std::uint32_t si : uses.invokes) {
            const auto& inv = std::get<ir::Invoke>(body[si].body);
            for (CSObjId o : delta) {
                const auto [site, heap] = objs_[o];
                const auto type = index_.site(site).type;
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
                CtxId cc = flavor_ == Flavor::CallSite ? push_front(callSiteId(mid, si), contexts_[ctx], k_)
                                                       : push_front(site, contexts_[heap], k_);
                addCallEdge(csm, si, csMethod(*callee, cc), o);
            }
        }
    }

    std::string renderContext(CtxId c) const {
        std::string out = "[";
        const auto& elems = contexts_[c];
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (i) out += ",";
            if (flavor_ == Flavor::CallSite) {
                const auto [m, stmt] = callSites_[elems[i]];
                out += index_.method(m).def->body[stmt].label;
            } else {
                out += index_.site(elems[i]).label;
            }
        }
        return out + "]";
    }

    std::string projectedName(std::uint64_t key) const {
        const std::uint32_t a = static_cast<std::uint32_t>((key >> 32) & 0x7fffffffu);
        const std::uint32_t b = static_cast<std::uint32_t>(key);
        if (key >> 63) return index_.site(a).label + "." + index_.fieldName(b);
        return index_.method(a).qname + "/" + index_.method(a).vars[b];
    }

    CSResult result() const {
        CSResult r;
        r.timedOut = timedOut_;
        std::vector<std::string> ctxNames(contexts_.size());
        for (CtxId c = 0; c < contexts_.size(); ++c) ctxNames[c] = renderContext(c);
        for (CSPtr p = 0; p < ptrs_.size(); ++p) {
            if (pt_[p].empty()) continue;
            const PtrKey& k = ptrs_[p];
            std::string ctxName;
            if (k.isField) {
                ctxName = ctxNames[objs_[k.a].second];
            } else {
                ctxName = ctxNames[methods_[k.a].second];
            }
            auto& set = r.pt[{ctxName, projectedName(projectedKey(p))}];
            for (CSObjId o : pt_[p].elems()) {
                set.insert({index_.site(objs_[o].first).label, ctxNames[objs_[o].second]});
            }
        }
        for (const auto& [caller, stmt, callee] : callEdges_) {
            const auto [cm, cc] = methods_[caller];
            const auto [tm, tc] = methods_[callee];
            r.callGraph.emplace(ctxNames[cc], index_.method(cm).def->body[stmt].label, ctxNames[tc],
                                index_.method(tm).qname);
        }
        for (CSMethodId m = 0; m < methods_.size(); ++m) {
            if (m >= processed_.size() || !processed_[m]) continue;
            r.reachable.emplace(index_.method(methods_[m].first).qname, ctxNames[methods_[m].second]);
        }
        for (const auto& [s, t, kind] : projected_) {
            r.projectedEdges.emplace(projectedName(s), projectedName(t), static_cast<EdgeKind>(kind));
        }
        r.diagnostics = diagnostics_;
        std::sort(r.diagnostics.begin(), r.diagnostics.end(), [](const auto& a, const auto& b) {
            return std::tie(a.where, a.message) < std::tie(b.where, b.message);
        });
        return r;
    }

    const ProgramIndex& index_;
    Flavor flavor_;
    int k_;
    Limits limits_;
    Clock::time_point start_;
    bool timedOut_ = false;

    Interner<std::vector<std::uint32_t>> contexts_;
    Interner<std::pair<MethodId, std::uint32_t>> callSites_;
    Interner<std::pair<ObjId, CtxId>> objs_;
    Interner<std::pair<MethodId, CtxId>> methods_;
    Interner<PtrKey> ptrs_;
    std::vector<PointsToSet> pt_;
    std::vector<std::vector<CSPtr>> succ_;
    std::set<std::tuple<CSPtr, CSPtr, int>> edgeSet_;
    std::set<std::tuple<std::uint64_t, std::uint64_t, int>> projected_;
    std::unordered_map<CSPtr, Uses> uses_;
    std::deque<std::pair<CSPtr, std::vector<CSObjId>>> worklist_;
    std::deque<CSMethodId> pendingMethods_;
    std::vector<bool> processed_;
    std::set<std::tuple<CSMethodId, std::uint32_t, CSMethodId>> callEdges_;
    std::set<std::string> diagSeen_;
    std::vector<ir::Diagnostic> diagnostics_;
};

}  // namespace

CSResult solveContextSensitive(const ProgramIndex& index, Flavor flavor, int k, const Limits& limits) {
    return CSSolver(index, flavor, k, limits).run();
}

AnalysisResult projectToCI(const CSResult& r) {
    AnalysisResult out;
    for (const auto& [key, objs] : r.pt) {
        auto& set = out.pt[key.second];
        for (const auto& o : objs) set.insert(o.site);
        out.nodes.insert(key.second);
    }
    for (const auto& [s, t, kind] : r.projectedEdges) {
        out.edges.push_back({s, t, kind, ""});
        out.nodes.insert(s);
        out.nodes.insert(t);
    }
    for (const auto& [cc, site, tc, callee] : r.callGraph) out.callGraph.emplace(site, callee);
    for (const auto& [m, c] : r.reachable) out.reachable.insert(m);
    out.diagnostics = r.diagnostics;
    return out;
}

}  // namespace pfg::ctx

#include <algorithm>

#include "csc_internal.hpp"

namespace pfg::csc {

namespace {

using detail::CutTable;

struct StoreTriple {
    int baseParam;
    FieldId field;
    int fromParam;
    PointerId origin;  // base variable of the innermost store
    auto operator<=>(const StoreTriple&) const = default;
};

struct LoadTriple {
    int baseParam;
    FieldId field;
    PointerId origin;  // base variable of the innermost load
    auto operator<=>(const LoadTriple&) const = default;
};

// Shortcut waiting for objects common to two pointers.
struct Join {
    enum Kind { Store, Load } kind;
    PointerId a;
    PointerId b;
    PointerId other;  // store: the `from` variable; load: the `to` variable
    FieldId field;
    bool marked;
};

class CscPolicy : public EdgePolicy {
public:
    CscPolicy(const ProgramIndex& index, const Options& options)
        : index_(index), options_(options), cuts_(detail::computeCutTable(index, options)) {
        const auto n = index.methods().size();
        incoming_.resize(n);
        storeTriples_.resize(n);
        storeSeen_.resize(n);
        loadTriples_.resize(n);
        loadSeen_.resize(n);
        unmarked_.resize(n);
        unmarkedSeen_.resize(n);
        entrances_.resize(n);
        exits_.resize(n);
        transfer_.assign(n, false);
        hostType_.assign(index.typeCount(), false);
        containers_ = (options.patterns & kContainerPattern) && options.model;
        if (containers_) {
            const auto& model = *options.model;
            for (const auto& e : model.entrances) {
                if (auto id = index.methodId(e.method)) entrances_[*id].emplace_back(e.param, e.category);
            }
            for (const auto& e : model.exits) {
                if (auto id = index.methodId(e.method)) exits_[*id].push_back(e.category);
            }
            for (const auto& t : model.transfers) {
                if (auto id = index.methodId(t)) transfer_[*id] = true;
            }
            for (ProgramIndex::TypeId t = 0; t < hostType_.size(); ++t) {
                for (const auto* roots : {&model.collectionRoots, &model.mapRoots}) {
                    for (const auto& r : *roots) {
                        if (auto rid = index.typeId(r); rid && index.subtype(t, *rid)) hostType_[t] = true;
                    }
                }
            }
        }
    }

    void attach(Solver& s) override { solver_ = &s; }

    bool cutsStore(MethodId m, std::uint32_t stmt) const override { return cuts_.cutStore[m][stmt]; }
    bool cutsReturn(MethodId callee) const override { return cuts_.retTags[callee] != 0; }
    std::string cutRule(MethodId callee) const override { return cutTagNames(cuts_.retTags[callee]); }

    void onMethodReachable(MethodId mid) override {
        const auto& info = index_.method(mid);
        const auto& m = *info.def;
        for (std::uint32_t i = 0; i < m.body.size(); ++i) {
            if (!cuts_.cutStore[mid][i]) continue;
            const auto& st = std::get<ir::Store>(m.body[i].body);
            addStoreTriple(mid, {*m.paramIndex(st.base), index_.fieldId(st.field), *m.paramIndex(st.rhs),
                                 solver_->varPtr(mid, info.var(st.base))});
        }
        if (!(cuts_.retTags[mid] & kTagFieldLoad)) return;
        for (const auto& s : m.body) {
            const auto* ld = s.as<ir::Load>();
            if (!ld || !cuts_.feedsReturn(mid, m, ld->lhs)) continue;
            const VarId base = info.var(ld->base);
            const PointerId basePtr = solver_->varPtr(mid, base);
            const FieldId f = index_.fieldId(ld->field);
            if (m.paramIndex(ld->base) && info.unredefined(base)) {
                addLoadTriple(mid, {*m.paramIndex(ld->base), f, basePtr});
            } else {
                // Loads through other bases are not covered by caller-side
                // shortcuts, so whatever they bring in gets relayed.
                loadWatch_[basePtr].emplace_back(mid, f);
                const std::vector<ObjId> objs = solver_->pt(basePtr).elems();
                for (ObjId o : objs) addUnmarked(mid, solver_->fieldPtr(o, f));
            }
        }
    }

    void onCallEdge(const CallSite& cs, MethodId callee) override {
        incoming_[callee].push_back(cs);
        for (std::size_t i = 0; i < storeTriples_[callee].size(); ++i) {
            applyStore(cs, storeTriples_[callee][i]);
        }
        for (std::size_t i = 0; i < loadTriples_[callee].size(); ++i) {
            applyLoad(cs, loadTriples_[callee][i]);
        }
        for (std::size_t i = 0; i < unmarked_[callee].size(); ++i) relay(cs, unmarked_[callee][i]);

        const auto lhs = solver_->lhsVar(cs);
        if ((cuts_.retTags[callee] & kTagLocalFlow) && lhs) {
            const PointerId to = solver_->varPtr(cs.caller, *lhs);
            for (int k : cuts_.localFlowParams[callee]) {
                if (auto a = solver_->argVar(cs, k)) emit(solver_->varPtr(cs.caller, *a), to, "SHORTCUTLFLOW");
            }
        }

        if (!containers_ || solver_->invokeAt(cs).kind != ir::InvokeKind::Virtual) return;
        const PointerId recv = solver_->varPtr(cs.caller, *solver_->argVar(cs, 0));
        for (const auto& [k, c] : entrances_[callee]) {
            if (auto a = solver_->argVar(cs, k)) {
                watchHosts(recv, {true, c, solver_->varPtr(cs.caller, *a)});
            }
        }
        if (lhs) {
            const PointerId to = solver_->varPtr(cs.caller, *lhs);
            for (Category c : exits_[callee]) watchHosts(recv, {false, c, to});
            if (transfer_[callee]) addHostEdge(recv, to);
        }
        drainHosts();
    }

    void onPointsToDelta(PointerId p, const std::vector<ObjId>& delta) override {
        if (auto it = joinsOn_.find(p); it != joinsOn_.end()) {
            const std::vector<std::size_t> ids = it->second;
            for (std::size_t id : ids) {
                const Join j = joins_[id];
                const PointerId other = j.a == p ? j.b : j.a;
                for (ObjId o : delta) {
                    if (other == p || solver_->pt(other).contains(o)) fire(j, o);
                }
            }
        }
        if (auto it = loadWatch_.find(p); it != loadWatch_.end()) {
            const auto watches = it->second;
            for (const auto& [m, f] : watches) {
                for (ObjId o : delta) addUnmarked(m, solver_->fieldPtr(o, f));
            }
        }
        if (containers_) {
            std::vector<ObjId> hosts;
            for (ObjId o : delta) {
                if (hostType_[index_.site(o).type]) hosts.push_back(o);
            }
            if (!hosts.empty()) {
                hostQueue_.emplace_back(p, std::move(hosts));
                drainHosts();
            }
        }
    }

    void onEdgeAdded(PointerId s, PointerId t, EdgeKind kind) override {
        const bool marked = marking_;
        marking_ = false;
        if (containers_ && !(kind == EdgeKind::Return && isTransferReturn(s))) addHostEdge(s, t);
        if (!marked && kind != EdgeKind::Load && !isFeederCopy(s, t)) {
            if (auto m = fieldLoadRetOwner(t)) addUnmarked(*m, s);
        }
        if (containers_) drainHosts();
    }

    void finish(AnalysisResult& r) override {
        for (const auto& [p, set] : hosts_) {
            if (set.empty()) continue;
            auto& out = r.hosts[solver_->pointerName(p)];
            for (ObjId o : set.elems()) out.insert(index_.site(o).label);
        }
    }

private:
    struct HostWatch {
        bool source;
        Category category;
        PointerId ptr;
        auto operator<=>(const HostWatch&) const = default;
    };

    // --- field stores

    void addStoreTriple(MethodId m, const StoreTriple& t) {
        if (!storeSeen_[m].insert(t).second) return;
        storeTriples_[m].push_back(t);
        for (std::size_t i = 0; i < incoming_[m].size(); ++i) applyStore(incoming_[m][i], t);
    }

    void applyStore(const CallSite& cs, const StoreTriple& t) {
        const auto base = solver_->argVar(cs, t.baseParam);
        const auto from = solver_->argVar(cs, t.fromParam);
        if (!base || !from) return;
        const auto& caller = index_.method(cs.caller);
        const auto bi = caller.paramIndexOf(*base);
        const auto fi = caller.paramIndexOf(*from);
        if (bi && fi && *fi >= 1 && caller.unredefined(*base) && caller.unredefined(*from)) {
            addStoreTriple(cs.caller, {*bi, t.field, *fi, t.origin});
            return;
        }
        addJoin({Join::Store, solver_->varPtr(cs.caller, *base), t.origin, solver_->varPtr(cs.caller, *from),
                 t.field, false});
    }

    // --- field loads

    void addLoadTriple(MethodId m, const LoadTriple& t) {
        if (!loadSeen_[m].insert(t).second) return;
        loadTriples_[m].push_back(t);
        for (std::size_t i = 0; i < incoming_[m].size(); ++i) applyLoad(incoming_[m][i], t);
    }

    void applyLoad(const CallSite& cs, const LoadTriple& t) {
        const auto lhs = solver_->lhsVar(cs);
        const auto base = solver_->argVar(cs, t.baseParam);
        if (!lhs || !base) return;
        const auto& caller = index_.method(cs.caller);
        const auto bi = caller.paramIndexOf(*base);
        const bool lift = (cuts_.retTags[cs.caller] & kTagFieldLoad) &&
                          cuts_.feedsReturn(cs.caller, *caller.def, caller.vars[*lhs]) && bi &&
                          caller.unredefined(*base);
        addJoin({Join::Load, solver_->varPtr(cs.caller, *base), t.origin, solver_->varPtr(cs.caller, *lhs), t.field,
                 lift});
        if (lift) addLoadTriple(cs.caller, {*bi, t.field, t.origin});
    }

    // Owner of p when p is a return variable (or feeder) under the load pattern.
    std::optional<MethodId> fieldLoadRetOwner(PointerId p) const {
        const auto& k = solver_->key(p);
        if (k.isField || !(cuts_.retTags[k.a] & kTagFieldLoad)) return std::nullopt;
        const auto& info = index_.method(k.a);
        if (!cuts_.feedsReturn(k.a, *info.def, info.vars[k.b])) return std::nullopt;
        return k.a;
    }

    // A feeder's copy into the return: what the feeder holds is either covered
    // by load shortcuts or already recorded as unmarked.
    bool isFeederCopy(PointerId s, PointerId t) const {
        const auto& ks = solver_->key(s);
        const auto& kt = solver_->key(t);
        if (ks.isField || kt.isField || ks.a != kt.a) return false;
        const auto& info = index_.method(ks.a);
        return info.retVar && *info.retVar == kt.b && cuts_.retFeeders[ks.a].count(info.vars[ks.b]);
    }

    // `n` reaches m's return variable by a route no load shortcut accounts for.
    void addUnmarked(MethodId m, PointerId n) {
        if (!unmarkedSeen_[m].insert(n).second) return;
        unmarked_[m].push_back(n);
        for (std::size_t i = 0; i < incoming_[m].size(); ++i) relay(incoming_[m][i], n);
    }

    void relay(const CallSite& cs, PointerId n) {
        if (auto lhs = solver_->lhsVar(cs)) emit(n, solver_->varPtr(cs.caller, *lhs), "RELAYEDGE");
    }

    // --- joins

    void addJoin(const Join& j) {
        auto key = std::make_tuple(static_cast<int>(j.kind), j.a, j.b, j.other, j.field, j.marked);
        if (!joinSeen_.insert(key).second) return;
        const std::size_t id = joins_.size();
        joins_.push_back(j);
        joinsOn_[j.a].push_back(id);
        if (j.b != j.a) joinsOn_[j.b].push_back(id);
        const std::vector<ObjId> objs = solver_->pt(j.a).elems();
        for (ObjId o : objs) {
            if (solver_->pt(j.b).contains(o)) fire(j, o);
        }
    }

    void fire(const Join& j, ObjId o) {
        const PointerId fp = solver_->fieldPtr(o, j.field);
        if (j.kind == Join::Store) {
            emit(j.other, fp, "SHORTCUTSTORE");
        } else {
            emit(fp, j.other, "SHORTCUTLOAD", j.marked);
        }
    }

    void emit(PointerId s, PointerId t, const char* rule, bool marked = false) {
        if (options_.dropShortcut >= 0) {
            auto [it, fresh] = requested_.emplace(s, t);
            if (fresh && static_cast<long>(requested_.size()) - 1 == options_.dropShortcut) dropped_ = {s, t};
            if (dropped_ && *dropped_ == std::make_pair(s, t)) return;
        }
        marking_ = marked;
        solver_->addEdge(s, t, EdgeKind::Shortcut, rule);
        marking_ = false;
        // The edge may have existed already, so the relay bookkeeping cannot
        // rely on onEdgeAdded alone.
        if (!marked) {
            if (auto m = fieldLoadRetOwner(t)) addUnmarked(*m, s);
        }
    }

    // --- container hosts

    bool isTransferReturn(PointerId s) const {
        const auto& k = solver_->key(s);
        if (k.isField || !transfer_[k.a]) return false;
        const auto& ret = index_.method(k.a).retVar;
        return ret && *ret == k.b;
    }

    void addHostEdge(PointerId s, PointerId t) {
        hostSucc_[s].push_back(t);
        if (auto it = hosts_.find(s); it != hosts_.end() && !it->second.empty()) {
            hostQueue_.emplace_back(t, it->second.elems());
        }
    }

    void watchHosts(PointerId recv, const HostWatch& w) {
        if (!watchSeen_.emplace(recv, w).second) return;
        hostWatch_[recv].push_back(w);
        if (auto it = hosts_.find(recv); it != hosts_.end()) {
            const std::vector<ObjId> hs = it->second.elems();
            for (ObjId h : hs) relate(h, w);
        }
    }

    void relate(ObjId h, const HostWatch& w) {
        const auto key = std::make_pair(h, static_cast<int>(w.category));
        auto& mine = w.source ? sources_[key] : targets_[key];
        if (std::find(mine.begin(), mine.end(), w.ptr) != mine.end()) return;
        mine.push_back(w.ptr);
        const std::vector<PointerId> others = w.source ? targets_[key] : sources_[key];
        for (PointerId o : others) {
            if (w.source) emit(w.ptr, o, "SHORTCUTCONTAINER");
            else emit(o, w.ptr, "SHORTCUTCONTAINER");
        }
    }

    void drainHosts() {
        if (draining_) return;
        draining_ = true;
        while (!hostQueue_.empty()) {
            auto [p, objs] = std::move(hostQueue_.front());
            hostQueue_.pop_front();
            const std::vector<ObjId> delta = hosts_[p].addAll(objs);
            if (delta.empty()) continue;
            if (auto it = hostSucc_.find(p); it != hostSucc_.end()) {
                for (std::size_t i = 0; i < it->second.size(); ++i) hostQueue_.emplace_back(it->second[i], delta);
            }
            if (auto it = hostWatch_.find(p); it != hostWatch_.end()) {
                const auto watches = it->second;
                for (const auto& w : watches) {
                    for (ObjId h : delta) relate(h, w);
                }
            }
        }
        draining_ = false;
    }

    const ProgramIndex& index_;
    Options options_;
    CutTable cuts_;
    Solver* solver_ = nullptr;

    std::vector<std::vector<CallSite>> incoming_;
    std::vector<std::vector<StoreTriple>> storeTriples_;
    std::vector<std::set<StoreTriple>> storeSeen_;
    std::vector<std::vector<LoadTriple>> loadTriples_;
    std::vector<std::set<LoadTriple>> loadSeen_;
    std::vector<std::vector<PointerId>> unmarked_;
    std::vector<std::unordered_set<PointerId>> unmarkedSeen_;
    std::unordered_map<PointerId, std::vector<std::pair<MethodId, FieldId>>> loadWatch_;

    std::vector<Join> joins_;
    std::unordered_map<PointerId, std::vector<std::size_t>> joinsOn_;
    std::set<std::tuple<int, PointerId, PointerId, PointerId, FieldId, bool>> joinSeen_;
    bool marking_ = false;

    bool containers_ = false;
    std::vector<std::vector<std::pair<int, Category>>> entrances_;
    std::vector<std::vector<Category>> exits_;
    std::vector<bool> transfer_;
    std::vector<bool> hostType_;
    std::unordered_map<PointerId, PointsToSet> hosts_;
    std::unordered_map<PointerId, std::vector<PointerId>> hostSucc_;
    std::unordered_map<PointerId, std::vector<HostWatch>> hostWatch_;
    std::set<std::pair<PointerId, HostWatch>> watchSeen_;
    std::map<std::pair<ObjId, int>, std::vector<PointerId>> sources_;
    std::map<std::pair<ObjId, int>, std::vector<PointerId>> targets_;
    std::deque<std::pair<PointerId, std::vector<ObjId>>> hostQueue_;
    bool draining_ = false;

    std::set<std::pair<PointerId, PointerId>> requested_;
    std::optional<std::pair<PointerId, PointerId>> dropped_;
};

}  // namespace

AnalysisResult solveCSC(const ProgramIndex& index, const Options& options) {
    CscPolicy policy(index, options);
    return solve(index, policy);
}

}  // namespace pfg::csc

#include <algorithm>

#include "csc_internal.hpp"

namespace pfg::csc {

namespace {

bool unredefinedParam(const ir::MethodDef& m, const std::string& var, const ProgramIndex::MethodInfo& info) {
    if (!m.paramIndex(var)) return false;
    return info.unredefined(info.var(var));
}

}  // namespace

std::map<std::string, std::set<int>> paramReturnFlow(const ir::MethodDef& m) {
    std::map<std::string, std::vector<const ir::Stmt*>> defs;
    for (const auto& s : m.body) {
        if (auto d = s.definedVar()) defs[*d].push_back(&s);
    }
    std::map<std::string, std::set<int>> rel;
    std::vector<std::string> params;
    if (!m.isStatic) params.emplace_back(ir::kThis);
    for (const auto& p : m.params) params.push_back(p.name);
    for (const auto& p : params) {
        if (!defs.count(p)) rel[p].insert(*m.paramIndex(p));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [var, stmts] : defs) {
            std::set<int> ks;
            bool ok = true;
            for (const ir::Stmt* s : stmts) {
                const auto* a = s->as<ir::Assign>();
                if (!a) {
                    ok = false;
                    break;
                }
                auto it = rel.find(a->rhs);
                if (it == rel.end() || it->second.empty()) {
                    ok = false;
                    break;
                }
                ks.insert(it->second.begin(), it->second.end());
            }
            if (!ok) continue;
            // A reassigned parameter still holds its incoming value on paths
            // that skip the reassignment.
            if (auto k = m.paramIndex(var)) ks.insert(*k);
            auto& cur = rel[var];
            if (cur != ks) {
                cur.insert(ks.begin(), ks.end());
                changed = true;
            }
        }
    }
    return rel;
}

namespace detail {

CutTable computeCutTable(const ProgramIndex& index, const Options& options) {
    const auto& methods = index.methods();
    CutTable t;
    t.cutStore.resize(methods.size());
    t.retTags.assign(methods.size(), 0);
    t.localFlowParams.resize(methods.size());
    t.retFeeders.resize(methods.size());

    const bool field = options.patterns & kFieldPattern;
    for (MethodId mid = 0; mid < methods.size(); ++mid) {
        const auto& info = methods[mid];
        const auto& m = *info.def;
        t.cutStore[mid].assign(m.body.size(), false);
        if (!field) continue;
        for (std::size_t i = 0; i < m.body.size(); ++i) {
            const auto* st = m.body[i].as<ir::Store>();
            if (!st) continue;
            // A stored `this` is left alone: lifting it would hand the whole
            // receiver set of every caller to the field.
            const auto rhsIndex = m.paramIndex(st->rhs);
            if (unredefinedParam(m, st->base, info) && unredefinedParam(m, st->rhs, info) && rhsIndex &&
                *rhsIndex >= 1) {
                t.cutStore[mid][i] = true;
            }
        }
    }

    if (field && options.loadHandling) {
        for (MethodId mid = 0; mid < methods.size(); ++mid) {
            const auto& m = *methods[mid].def;
            if (!m.retVar) continue;
            std::map<std::string, std::vector<const ir::Stmt*>> defs;
            for (const auto& s : m.body) {
                if (auto d = s.definedVar()) defs[*d].push_back(&s);
            }
            for (const auto& s : m.body) {
                const auto* a = s.as<ir::Assign>();
                if (!a || a->lhs != *m.retVar || a->rhs == *m.retVar || m.paramIndex(a->rhs)) continue;
                const auto& ds = defs[a->rhs];
                const bool onlyReads = !ds.empty() && std::all_of(ds.begin(), ds.end(), [](const ir::Stmt* d) {
                    return d->as<ir::Load>() || d->as<ir::Invoke>();
                });
                if (onlyReads) t.retFeeders[mid].insert(a->rhs);
            }
        }
        // Which (param, field) pairs each return value may be loaded through,
        // following calls by name since the call graph is not known yet.
        std::vector<std::set<std::pair<int, FieldId>>> summary(methods.size());
        bool changed = true;
        while (changed) {
            changed = false;
            for (MethodId mid = 0; mid < methods.size(); ++mid) {
                const auto& info = methods[mid];
                const auto& m = *info.def;
                if (!m.retVar) continue;
                for (const auto& s : m.body) {
                    if (auto d = s.definedVar(); !d || !t.feedsReturn(mid, m, *d)) continue;
                    if (const auto* ld = s.as<ir::Load>()) {
                        if (unredefinedParam(m, ld->base, info)) {
                            changed |= summary[mid].emplace(*m.paramIndex(ld->base), index.fieldId(ld->field)).second;
                        }
                    } else if (const auto* inv = s.as<ir::Invoke>()) {
                        std::vector<MethodId> callees;
                        if (inv->kind == ir::InvokeKind::Static) {
                            if (auto c = index.methodId(inv->receiver + "." + inv->method)) callees.push_back(*c);
                        } else {
                            callees = index.methodsNamed(inv->method, static_cast<int>(inv->args.size()));
                        }
                        for (MethodId c : callees) {
                            for (const auto& [k, f] : std::set(summary[c])) {
                                auto arg = inv->argAt(k);
                                if (arg && unredefinedParam(m, *arg, info)) {
                                    changed |= summary[mid].emplace(*m.paramIndex(*arg), f).second;
                                }
                            }
                        }
                    }
                }
            }
        }
        for (MethodId mid = 0; mid < methods.size(); ++mid) {
            if (!summary[mid].empty()) t.retTags[mid] |= kTagFieldLoad;
        }
    }

    if ((options.patterns & kContainerPattern) && options.model) {
        for (const auto& e : options.model->exits) {
            if (auto id = index.methodId(e.method)) t.retTags[*id] |= kTagContainer;
        }
    }

    if (options.patterns & kLocalFlowPattern) {
        for (MethodId mid = 0; mid < methods.size(); ++mid) {
            const auto& m = *methods[mid].def;
            if (!m.retVar) continue;
            auto rel = paramReturnFlow(m);
            auto it = rel.find(*m.retVar);
            // Values from `this` are excluded: a shortcut from the receiver
            // would ignore which objects actually dispatch here.
            if (it == rel.end() || it->second.empty() || it->second.count(0)) continue;
            t.retTags[mid] |= kTagLocalFlow;
            t.localFlowParams[mid] = it->second;
        }
    }
    return t;
}

}  // namespace detail

CutSets computeCuts(const ProgramIndex& index, const Options& options) {
    auto t = detail::computeCutTable(index, options);
    CutSets out;
    for (MethodId mid = 0; mid < index.methods().size(); ++mid) {
        const auto& m = *index.method(mid).def;
        for (std::size_t i = 0; i < m.body.size(); ++i) {
            if (t.cutStore[mid][i]) out.cutStores.insert(m.body[i].label);
        }
        if (t.retTags[mid]) out.cutReturns[index.method(mid).qname] = t.retTags[mid];
    }
    return out;
}

}  // namespace pfg::csc

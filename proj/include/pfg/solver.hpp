#pragma once

// Andersen-style inclusion analysis over an explicit pointer flow graph.
// The cut/shortcut machinery plugs in through EdgePolicy.

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pfg/ir.hpp"

namespace pfg {

using ir::ProgramIndex;
using MethodId = ProgramIndex::MethodId;
using VarId = ProgramIndex::VarId;
using ObjId = ProgramIndex::SiteId;
using FieldId = ProgramIndex::FieldId;
using PointerId = std::uint32_t;

enum class EdgeKind { Assign, Store, Load, Param, Return, Shortcut };

std::string_view edgeKindName(EdgeKind k);

// Sorted vector; sets are small in practice and iteration order is canonical.
class PointsToSet {
public:
    bool contains(ObjId o) const;
    bool insert(ObjId o);
    // Adds every element of `objs`, returning the ones that were new.
    std::vector<ObjId> addAll(const std::vector<ObjId>& objs);
    const std::vector<ObjId>& elems() const { return elems_; }
    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }

private:
    std::vector<ObjId> elems_;
};

struct PointerKey {
    bool isField = false;
    std::uint32_t a = 0;  // method | object
    std::uint32_t b = 0;  // variable | field
    bool operator==(const PointerKey&) const = default;
};

struct CallSite {
    MethodId caller = 0;
    std::uint32_t stmt = 0;
    bool operator==(const CallSite&) const = default;
    auto operator<=>(const CallSite&) const = default;
};

struct PfgEdge {
    std::string source;
    std::string target;
    EdgeKind kind = EdgeKind::Assign;
    std::string provenance;
    auto operator<=>(const PfgEdge&) const = default;
};

struct CutEntry {
    std::string source;
    std::string target;
    EdgeKind kind = EdgeKind::Store;
    std::string rule;
    auto operator<=>(const CutEntry&) const = default;
};

// Fully string-keyed so results from different solvers compare directly.
struct AnalysisResult {
    std::map<std::string, std::set<std::string>> pt;
    std::set<std::string> nodes;
    std::vector<PfgEdge> edges;
    std::set<std::pair<std::string, std::string>> callGraph;  // (call-site label, callee)
    std::set<std::string> reachable;
    std::vector<CutEntry> cutLog;
    std::vector<PfgEdge> shortcuts;
    std::map<std::string, std::set<std::string>> hosts;
    std::vector<ir::Diagnostic> diagnostics;

    const std::set<std::string>& ptOf(const std::string& pointer) const;
};

class Solver;

class EdgePolicy {
public:
    virtual ~EdgePolicy() = default;
    virtual void attach(Solver&) {}
    virtual bool cutsStore(MethodId, std::uint32_t /*stmt*/) const { return false; }
    virtual bool cutsReturn(MethodId /*callee*/) const { return false; }
    virtual std::string cutRule(MethodId) const { return {}; }
    virtual void onMethodReachable(MethodId) {}
    virtual void onCallEdge(const CallSite&, MethodId /*callee*/) {}
    virtual void onPointsToDelta(PointerId, const std::vector<ObjId>&) {}
    virtual void onEdgeAdded(PointerId, PointerId, EdgeKind) {}
    virtual void finish(AnalysisResult&) {}
};

class Solver {
public:
    Solver(const ProgramIndex& index, EdgePolicy& policy);

    void run();
    AnalysisResult result() const;

    const ProgramIndex& index() const { return index_; }
    PointerId varPtr(MethodId m, VarId v);
    PointerId fieldPtr(ObjId o, FieldId f);
    const PointerKey& key(PointerId p) const { return keys_[p]; }
    std::size_t pointerCount() const { return keys_.size(); }
    std::string pointerName(PointerId p) const;
    const PointsToSet& pt(PointerId p) const { return pt_[p]; }

    // Returns false when the edge already existed.
    bool addEdge(PointerId s, PointerId t, EdgeKind kind, std::string provenance);
    bool isReachable(MethodId m) const { return reachable_[m]; }
    const std::vector<std::pair<CallSite, MethodId>>& callEdges() const { return callEdgeList_; }
    const ir::Invoke& invokeAt(const CallSite& cs) const;
    // Variable passed as argument k at `cs` (k = 0 is the receiver).
    std::optional<VarId> argVar(const CallSite& cs, int k) const;
    std::optional<VarId> lhsVar(const CallSite& cs) const;

private:
    struct VarUses {
        std::vector<std::uint32_t> stores;   // stmt indices using the var as base
        std::vector<std::uint32_t> loads;
        std::vector<std::uint32_t> invokes;  // virtual calls with this receiver
    };

    void push(PointerId p, const std::vector<ObjId>& objs);
    void addReachable(MethodId m);
    void processMethod(MethodId m);
    void addCallEdge(const CallSite& cs, MethodId callee, std::optional<ObjId> recv);
    void propagate(PointerId p, const std::vector<ObjId>& delta);
    void applyUses(PointerId p, const VarUses& uses, const std::vector<ObjId>& objs);
    void logCut(PointerId s, PointerId t, EdgeKind kind, std::string rule);

    const ProgramIndex& index_;
    EdgePolicy& policy_;

    std::vector<PointerKey> keys_;
    std::unordered_map<std::uint64_t, PointerId> keyIds_;
    std::vector<PointsToSet> pt_;
    std::vector<std::vector<PointerId>> succ_;
    std::unordered_set<std::uint64_t> edgeSet_;
    struct EdgeRec {
        PointerId s, t;
        EdgeKind kind;
        std::string provenance;
    };
    std::vector<EdgeRec> edges_;
    std::unordered_map<PointerId, VarUses> uses_;

    std::deque<std::pair<PointerId, std::vector<ObjId>>> worklist_;
    std::deque<MethodId> pendingMethods_;
    std::vector<bool> reachable_;
    std::set<std::pair<CallSite, MethodId>> callEdgeSet_;
    std::vector<std::pair<CallSite, MethodId>> callEdgeList_;
    std::set<std::tuple<PointerId, PointerId, int>> cutSet_;
    std::vector<std::tuple<PointerId, PointerId, EdgeKind, std::string>> cuts_;
    std::set<std::string> diagSeen_;
    std::vector<ir::Diagnostic> diagnostics_;
};

AnalysisResult solve(const ProgramIndex& index, EdgePolicy& policy);
AnalysisResult solveCI(const ProgramIndex& index);

// Directed reachability over result edges. Throws on an unknown node.
bool pfgReachable(const AnalysisResult& r, const std::string& s, const std::string& t);

std::string exportDot(const AnalysisResult& r);

}  // namespace pfg

#include <doctest.h>

#include "corpus.hpp"
#include "pfg/solver.hpp"
#include "random_program.hpp"
#include "reference.hpp"

using namespace pfg;

namespace {

std::set<std::string> S(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

void checkAgainstReference(const testing::Loaded& l) {
    const AnalysisResult r = solveCI(*l.index);
    const testing::Reference ref = testing::referenceCI(*l.program);
    CHECK(r.pt == ref.pt);
    CHECK(r.callGraph == ref.callGraph);
    CHECK(r.reachable == ref.reachable);
    std::set<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& e : r.edges) edges.emplace(e.source, e.target, std::string(edgeKindName(e.kind)));
    CHECK(edges == ref.edges);
    CHECK(edges.size() == r.edges.size());
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("fig1 context-insensitive merge") {
    auto l = testing::loadFile("paper/fig1.ir");
    auto r = solveCI(*l.index);
    CHECK(r.ptOf("Main.main/result1") == S({"o16", "o21"}));
    CHECK(r.ptOf("Main.main/result2") == S({"o16", "o21"}));
    CHECK(r.ptOf("o15.item") == S({"o16", "o21"}));
    CHECK(r.reachable == S({"Main.main", "Carton.setItem", "Carton.getItem"}));
    CHECK(r.callGraph.size() == 4);
    CHECK(r.shortcuts.empty());
    CHECK(r.cutLog.empty());
    CHECK(r.diagnostics.empty());
}

TEST_CASE("matches the reference evaluator on small corpus programs") {
    int compared = 0;
    for (const auto& e : testing::fullCorpus()) {
        auto l = testing::load(e.name, e.text);
        if (l.statementCount() > 50) continue;
        CAPTURE(e.name);
        checkAgainstReference(l);
        ++compared;
    }
    CHECK(compared >= 10);
}

TEST_CASE("matches the reference evaluator on random programs") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        checkAgainstReference(testing::load("random", testing::randomProgram(seed)));
    }
}

TEST_CASE("receiver type selects the override; casts do not filter") {
    auto l = testing::load("t", R"(
class A {
  method who(this): Object {
    local r: Object;
    r = new Object @ra;
    return r;
  }
}
class B extends A {
  method who(this): Object {
    local r: Object;
    r = new Object @rb;
    return r;
  }
}
class Main {
  method main() {
    local a: A;
    local b: B;
    local x: Object;
    a = new A @o1;
    if * goto L;
    a = new B @o2;
    L: x = a.who();
    b = (B) a;
  }
}
)");
    auto r = solveCI(*l.index);
    CHECK(r.ptOf("Main.main/x") == S({"ra", "rb"}));
    CHECK(r.ptOf("Main.main/b") == S({"o1", "o2"}));
    CHECK(r.ptOf("A.who/this") == S({"o1"}));
    CHECK(r.ptOf("B.who/this") == S({"o2"}));
}

TEST_CASE("unreachable code contributes nothing") {
    auto l = testing::load("t", R"(
class Dead {
  method run(this) {
    local o: Object;
    o = new Object @dead;
  }
}
class Main {
  method main() {
    local o: Object;
    o = new Object @live;
  }
}
)");
    auto r = solveCI(*l.index);
    CHECK(r.reachable == S({"Main.main"}));
    CHECK(r.pt.size() == 1);
}

TEST_CASE("dispatch failures become diagnostics, not errors") {
    auto l = testing::load("t", R"(
class A {
  method go(this) { }
}
class Main {
  method main() {
    local a: A;
    local o: Object;
    o = new Object @o1;
    a = new A @o2;
    if * goto L;
    a = o;
    L: a.go();
  }
}
)");
    auto r = solveCI(*l.index);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message.find("no method 'go'") != std::string::npos);
    CHECK(r.reachable.count("A.go"));
}

TEST_CASE("pfgReachable follows edges and rejects unknown nodes") {
    auto l = testing::loadFile("paper/fig1.ir");
    auto r = solveCI(*l.index);
    CHECK(pfgReachable(r, "Main.main/item1", "Main.main/result2"));
    CHECK(pfgReachable(r, "Main.main/item1", "Main.main/item1"));
    CHECK(!pfgReachable(r, "Main.main/result1", "Main.main/item1"));
    CHECK_THROWS(pfgReachable(r, "nope", "Main.main/item1"));
}

TEST_CASE("DOT export is stable and lists every edge") {
    auto l = testing::loadFile("paper/fig3.ir");
    auto r = solveCI(*l.index);
    const std::string dot = exportDot(r);
    CHECK(dot == exportDot(solveCI(*l.index)));
    CHECK(dot.rfind("digraph pfg {", 0) == 0);
    std::size_t arrows = 0;
    for (std::size_t at = dot.find(" -> "); at != std::string::npos; at = dot.find(" -> ", at + 1)) ++arrows;
    CHECK(arrows == r.edges.size() + r.cutLog.size());
}

TEST_CASE("points-to set keeps sorted unique elements") {
    PointsToSet s;
    CHECK(s.insert(5));
    CHECK(!s.insert(5));
    auto added = s.addAll({3, 9, 5, 3});
    CHECK(added == std::vector<ObjId>{3, 9});
    CHECK(s.elems() == std::vector<ObjId>{3, 5, 9});
    CHECK(s.contains(9));
    CHECK(!s.contains(4));
}

}  // TEST_SUITE

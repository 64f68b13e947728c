#include <doctest.h>

#include "corpus.hpp"
#include "pfg/cutshortcut.hpp"
#include "pfg/stress.hpp"

using namespace pfg;
using namespace pfg::csc;

namespace {

CutSets cutsOf(const testing::Loaded& l, unsigned patterns = kAllPatterns) {
    Options o;
    o.patterns = patterns;
    o.model = l.modelPtr();
    return computeCuts(*l.index, o);
}

std::map<std::string, std::set<int>> flowOf(const std::string& text, const std::string& method) {
    static std::vector<std::unique_ptr<ir::Program>> keep;
    keep.push_back(std::make_unique<ir::Program>(ir::parseProgram(text)));
    return paramReturnFlow(*keep.back()->findMethod(method));
}

}  // namespace

TEST_SUITE("cuts") {

TEST_CASE("fig1: the setter store and the getter return are cut") {
    auto c = cutsOf(testing::loadFile("paper/fig1.ir"));
    CHECK(c.cutStores == std::set<std::string>{"Carton.setItem#0"});
    REQUIRE(c.cutReturns.count("Carton.getItem"));
    CHECK(cutTagNames(c.cutReturns.at("Carton.getItem")) == "CUTPROPLOAD");
    CHECK(c.cutReturns.size() == 1);
}

TEST_CASE("fig3: only the innermost store is cut") {
    auto c = cutsOf(testing::loadFile("paper/fig3.ir"));
    CHECK(c.cutStores == std::set<std::string>{"A.set#0"});
    CHECK(c.cutReturns.empty());
}

TEST_CASE("fig5: select returns only parameter values") {
    auto c = cutsOf(testing::loadFile("paper/fig5.ir"));
    CHECK(c.cutStores.empty());
    REQUIRE(c.cutReturns.count("Main.select"));
    CHECK(c.cutReturns.at("Main.select") == kTagLocalFlow);
    CHECK(cutTagNames(kTagLocalFlow) == "CUTLFLOW");
}

TEST_CASE("fig4: container exits are cut only with the container pattern and a model") {
    auto l = testing::loadFile("paper/fig4.ir");
    auto all = cutsOf(l);
    CHECK((all.cutReturns.at("List.get") & kTagContainer) != 0);
    CHECK((all.cutReturns.at("Iterator.next") & kTagContainer) != 0);
    auto noContainer = cutsOf(l, kFieldPattern | kLocalFlowPattern);
    CHECK(!(noContainer.cutReturns.count("List.get") && (noContainer.cutReturns.at("List.get") & kTagContainer)));
    Options o;
    o.patterns = kContainerPattern;
    CHECK(computeCuts(*l.index, o).cutReturns.empty());
}

TEST_CASE("no pattern, no cut") {
    for (const auto& e : testing::paperPrograms()) {
        auto c = cutsOf(testing::load(e.name, e.text), 0);
        CHECK(c.cutStores.empty());
        CHECK(c.cutReturns.empty());
    }
}

TEST_CASE("every cut store has unredefined parameters as base and value") {
    for (const auto& e : testing::fullCorpus()) {
        CAPTURE(e.name);
        auto l = testing::load(e.name, e.text);
        for (const auto& label : cutsOf(l).cutStores) {
            const ir::Stmt* s = nullptr;
            const ir::MethodDef* owner = nullptr;
            for (const auto& c : l.program->classes) {
                for (const auto& m : c.methods) {
                    if (const auto* f = m.findStmt(label)) s = f, owner = &m;
                }
            }
            REQUIRE(s);
            const auto* st = s->as<ir::Store>();
            REQUIRE(st);
            CHECK(owner->paramIndex(st->base));
            CHECK(owner->paramIndex(st->rhs));
            CHECK(*owner->paramIndex(st->rhs) >= 1);
            CHECK(ir::defStatements(*owner, st->base).empty());
            CHECK(ir::defStatements(*owner, st->rhs).empty());
        }
    }
}

TEST_CASE("redefined parameters and stored receivers are not cut") {
    auto redefined = cutsOf(testing::loadFile("edge/redefined_param.ir"));
    CHECK(redefined.cutStores.empty());
    auto self = cutsOf(testing::loadFile("edge/store_this.ir"));
    CHECK(self.cutStores == std::set<std::string>{"Peer.put#0"});
}

TEST_CASE("a getter reached through a copy of the loaded value is still cut") {
    auto c = cutsOf(testing::loadFile("edge/mixed_return.ir"));
    REQUIRE(c.cutReturns.count("Box.m"));
    CHECK(c.cutReturns.at("Box.m") == kTagFieldLoad);
}

TEST_CASE("load handling can be switched off") {
    auto l = testing::loadFile("paper/fig1.ir");
    Options o;
    o.loadHandling = false;
    auto c = computeCuts(*l.index, o);
    CHECK(c.cutStores.size() == 1);
    CHECK(c.cutReturns.empty());
}

TEST_CASE("paramReturnFlow follows copies back to parameters") {
    const char* text = R"(
class Main {
  method main() { }
  method select(p1: Object, p2: Object): Object {
    local r: Object;
    if * goto L;
    r = p1;
    goto E;
    L: r = p2;
    E: return r;
  }
  method chain(p: Object): Object {
    local a: Object;
    local b: Object;
    a = p;
    b = a;
    return b;
  }
  method mixed(p: Object): Object {
    local a: Object;
    a = p;
    if * goto L;
    a = new Object @n1;
    L: return a;
  }
  method redefine(p: Object, q: Object): Object {
    if * goto L;
    p = q;
    L: return p;
  }
}
)";
    auto sel = flowOf(text, "Main.select");
    CHECK(sel["r"] == std::set<int>{1, 2});
    CHECK(flowOf(text, "Main.chain")["b"] == std::set<int>{1});
    CHECK(!flowOf(text, "Main.mixed").count("a"));
    CHECK(flowOf(text, "Main.redefine")["p"] == std::set<int>{1, 2});
}

TEST_CASE("paramReturnFlow places `this` at index 0") {
    auto rel = flowOf(R"(
class A {
  method me(this): A {
    local r: A;
    r = this;
    return r;
  }
}
class Main { method main() { } }
)",
                      "A.me");
    CHECK(rel["r"] == std::set<int>{0});
}

TEST_CASE("a local flow that can return `this` is not cut") {
    auto l = testing::loadFile("edge/local_flow_mix.ir");
    auto c = cutsOf(l);
    CHECK(c.cutReturns.count("Sel.pick"));
    CHECK(c.cutReturns.count("Sel.reassign"));
    CHECK(!c.cutReturns.count("Sel.self"));
    CHECK(!c.cutReturns.count("Sel.orNew"));
}

TEST_CASE("pattern names") {
    CHECK(parsePatterns("all") == kAllPatterns);
    CHECK(parsePatterns("none") == 0);
    CHECK(parsePatterns("field") == kFieldPattern);
    CHECK(parsePatterns("local,container") == (kLocalFlowPattern | kContainerPattern));
    CHECK_THROWS_AS(parsePatterns("fields"), Error);
    CHECK(parsePatterns("") == 0);
    CHECK_THROWS_AS(parsePatterns("field,,local"), Error);
}

TEST_CASE("bundled container model validates against the library") {
    auto prog = ir::parseProgram(stress::containerLibrary() + "class Main { method main() { } }");
    auto m = loadContainerModel(stress::containerModel(), prog);
    CHECK(m.entrances.size() == 3);
    CHECK(m.exits.size() == 4);
    CHECK(m.transfers.size() == 3);
    CHECK(m.warnings.empty());
}

TEST_CASE("malformed container models are rejected") {
    auto prog = ir::parseProgram(stress::containerLibrary() + "class Main { method main() { } }");
    auto kindOf = [&](const std::string& json) {
        try {
            loadContainerModel(json, prog);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    CHECK(kindOf("not json") == ErrorKind::Model);
    CHECK(kindOf("[]") == ErrorKind::Model);
    CHECK(kindOf(R"({"bogus": []})") == ErrorKind::Model);
    CHECK(kindOf(R"({"exits": [{"method": "List.nope", "category": "COL_VALUE"}]})") == ErrorKind::Model);
    CHECK(kindOf(R"({"exits": [{"method": "List.get", "category": "SOMETHING"}]})") == ErrorKind::Model);
    CHECK(kindOf(R"({"entrances": [{"method": "List.add", "param": 5, "category": "COL_VALUE"}]})") ==
          ErrorKind::Model);
}

TEST_CASE("model warns about container methods it does not classify") {
    auto prog = ir::parseProgram(stress::containerLibrary() + "class Main { method main() { } }");
    auto m = loadContainerModel(
        R"({"entrances": [], "exits": [{"method": "List.get", "category": "COL_VALUE"}], "transfers": [],
            "collectionRoots": ["List"], "mapRoots": []})",
        prog);
    bool flagged = false;
    for (const auto& w : m.warnings) flagged = flagged || w.find("List.add ") != std::string::npos;
    CHECK(flagged);
}

}  // TEST_SUITE

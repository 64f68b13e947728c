#include <doctest.h>

#include "corpus.hpp"
#include "pfg/ir.hpp"
#include "random_program.hpp"

using namespace pfg;
using namespace pfg::ir;

namespace {

ErrorKind parseErrorKind(const std::string& text) {
    try {
        parseProgram(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a parse error");
    return ErrorKind::Io;
}

std::vector<std::string> diagnosticsOf(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& d : checkProgram(parseProgram(text))) out.push_back(d.where + ": " + d.message);
    return out;
}

const char* kSmall = R"(
class A {
  field f: Object;
  method set(this, v: Object) {
    this.f = v;
  }
  method get(this): Object {
    local r: Object;
    r = this.f;
    return r;
  }
}
class B extends A {
  method get(this): Object {
    local r: Object;
    r = null;
    return r;
  }
}
class Main {
  method main() {
    local a: A;
    local o: Object;
    a = new B @s1;
    o = new Object @s2;
    a.set(o);
    o = a.get();
  }
}
)";

}  // namespace

TEST_SUITE("ir") {

TEST_CASE("print then parse gives the same program on the whole corpus") {
    for (const auto& e : testing::fullCorpus()) {
        CAPTURE(e.name);
        Program p = parseProgram(e.text);
        Program q = parseProgram(printProgram(p));
        CHECK(p == q);
        CHECK(printProgram(q) == printProgram(p));
    }
}

TEST_CASE("round trip on random programs") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Program p = parseProgram(testing::randomProgram(seed));
        CHECK(parseProgram(printProgram(p)) == p);
    }
}

TEST_CASE("unlabelled statements get method-local positional labels") {
    Program p = parseProgram(kSmall);
    const MethodDef* main = p.findMethod("Main.main");
    REQUIRE(main);
    CHECK(main->body[0].label == "s1");
    CHECK(main->body[2].label == "Main.main#2");
    CHECK(main->findStmt("Main.main#3")->as<Invoke>()->method == "get");
}

TEST_CASE("several returns share one synthetic return variable") {
    Program p = parseProgram(R"(
class Main {
  method pick(a: Object, b: Object): Object {
    if * goto L;
    return a;
    L: return b;
  }
  method main() { }
}
)");
    const MethodDef* m = p.findMethod("Main.pick");
    REQUIRE(m->retVar);
    CHECK(*m->retVar == "ret$");
    CHECK(defStatements(*m, "ret$").size() == 2);
    CHECK(checkProgram(p).empty());
}

TEST_CASE("single return keeps its variable") {
    Program p = parseProgram(kSmall);
    CHECK(*p.findMethod("A.get")->retVar == "r");
    CHECK(!p.findMethod("A.set")->retVar);
}

TEST_CASE("syntax errors carry a location") {
    try {
        parseProgram("class A {\n  field f Object;\n}\n");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Syntax);
        CHECK(e.loc().line == 2);
    }
    CHECK(parseErrorKind("class A { method m() { x = new A; } }") == ErrorKind::Syntax);
    CHECK(parseErrorKind("class A { method m() { local x: A; x = ; } }") == ErrorKind::Syntax);
    CHECK(parseErrorKind("class A { method m() { $ } }") == ErrorKind::Syntax);
}

TEST_CASE("duplicate labels are rejected") {
    CHECK(parseErrorKind(R"(class A { method m() {
        local x: A; local y: A;
        x = new A @o1; y = new A @o1; } })") == ErrorKind::DuplicateLabel);
    CHECK(parseErrorKind(R"(class A { method m() {
        local x: A;
        L: x = null; L: x = null; } })") == ErrorKind::DuplicateLabel);
    CHECK(parseErrorKind("class A { method m(x: A) { local x: A; } }") == ErrorKind::DuplicateLabel);
}

TEST_CASE("unresolved names are rejected") {
    CHECK(parseErrorKind("class A { method m() { if * goto Nowhere; } }") == ErrorKind::Unresolved);
    CHECK(parseErrorKind("class A { method m() { local x: A; x = y; } }") == ErrorKind::Unresolved);
}

TEST_CASE("checker reports type-level problems") {
    CHECK(diagnosticsOf(kSmall).empty());
    auto d = diagnosticsOf(R"(
class A {
  field f: Object;
  method m(this, x: Object) { }
}
class B extends A {
  field f: Object;
  method m(this) { }
}
class Main {
  method main() {
    local a: A;
    local o: Object;
    a = new A @o1;
    a.nope();
    a.m();
    o = a.g;
    o = a.m(o);
    Main.other();
  }
}
)");
    auto has = [&](const std::string& needle) {
        for (const auto& s : d) {
            if (s.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    CHECK(has("shadows an inherited field"));
    CHECK(has("arity mismatch with overridden A.m"));
    CHECK(has("type 'A' has no method 'nope'"));
    CHECK(has("arity mismatch calling 'm'"));
    CHECK(has("type 'A' has no field 'g'"));
    CHECK(has("returns no value"));
    CHECK(has("class 'Main' has no method 'other'"));
}

TEST_CASE("an unknown superclass stops the hierarchy checks") {
    auto d = diagnosticsOf("class C extends Missing { } class Main { method main() { local c: C; c.x(); } }");
    REQUIRE(d.size() == 1);
    CHECK(d[0] == "C: unknown superclass 'Missing'");
}

TEST_CASE("checker reports a missing or malformed entry") {
    Program p = parseProgram("class Main { method run(x: Object) { } }");
    auto d = checkProgram(p);
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("not found") != std::string::npos);
    p.entry = "Main.run";
    d = checkProgram(p);
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("no arguments") != std::string::npos);
}

TEST_CASE("inheritance cycles are diagnosed") {
    auto d = diagnosticsOf("class A extends B { } class B extends A { } class Main { method main() { } }");
    CHECK(!d.empty());
}

TEST_CASE("dispatch walks up the superclass chain") {
    Program p = parseProgram(kSmall);
    CHECK(dispatch(p, "B", "get").qualifiedName() == "B.get");
    CHECK(dispatch(p, "B", "set").qualifiedName() == "A.set");
    CHECK(!dispatch(p, "A", "missing"));
    CHECK(subtypeOf(p, "B", "A"));
    CHECK(subtypeOf(p, "B", "Object"));
    CHECK(!subtypeOf(p, "A", "B"));
    CHECK_THROWS_AS(subtypeOf(p, "Nope", "A"), Error);
}

TEST_CASE("defStatements ignores parameter binding") {
    Program p = parseProgram(kSmall);
    const MethodDef* set = p.findMethod("A.set");
    CHECK(defStatements(*set, "v").empty());
    CHECK(defStatements(*set, "this").empty());
    const MethodDef* main = p.findMethod("Main.main");
    CHECK(defStatements(*main, "o") == std::vector<std::string>{"s2", "Main.main#3"});
    CHECK_THROWS_AS(defStatements(*main, "zz"), Error);
}

TEST_CASE("program index numbers everything densely") {
    auto l = testing::load("small", kSmall);
    const auto& ix = *l.index;
    CHECK(ix.methods().size() == 4);
    CHECK(ix.method(ix.entry()).qname == "Main.main");
    REQUIRE(ix.siteId("s1"));
    CHECK(ix.typeName(ix.site(*ix.siteId("s1")).type) == "B");
    auto a = ix.typeId("A"), b = ix.typeId("B");
    CHECK(ix.subtype(*b, *a));
    CHECK(ix.method(*ix.dispatch(*b, "set")).qname == "A.set");
    CHECK(ix.methodsNamed("get", 0).size() == 2);
    CHECK(ix.method(*ix.methodId("A.set")).vars == std::vector<std::string>{"this", "v"});
}

}  // TEST_SUITE

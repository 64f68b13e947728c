#include "random_program.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace testing {

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
    bool coin() { return pick(2) == 0; }
};

// Method bodies come in variants so different seeds exercise different
// cut conditions.
std::string setter(Gen& g, const std::string& name, const std::string& field) {
    std::ostringstream o;
    o << "  method " << name << "(this, x: T) {\n";
    switch (g.pick(4)) {
        case 0: o << "    this." << field << " = x;\n"; break;
        case 1: o << "    this.put(x);\n"; break;
        case 2: o << "    local y: T;\n    y = x;\n    this." << field << " = y;\n"; break;
        default: o << "    if * goto L;\n    x = this;\n    L: this." << field << " = x;\n"; break;
    }
    o << "  }\n";
    return o.str();
}

std::string getter(Gen& g, const std::string& name, const std::string& field) {
    std::ostringstream o;
    o << "  method " << name << "(this): T {\n    local r: T;\n";
    switch (g.pick(4)) {
        case 0: o << "    r = this." << field << ";\n"; break;
        case 1: o << "    r = this.take();\n"; break;
        case 2: o << "    local q: T;\n    q = this." << field << ";\n    r = q.g;\n"; break;
        default: o << "    r = this." << field << ";\n    if * goto L;\n    r = this;\n    L: ;\n"; break;
    }
    o << "    return r;\n  }\n";
    return o.str();
}

std::string pickMethod(Gen& g) {
    std::ostringstream o;
    o << "  method pick(this, a: T, b: T): T {\n    local r: T;\n";
    switch (g.pick(3)) {
        case 0: o << "    r = a;\n    if * goto L;\n    r = b;\n    L: return r;\n"; break;
        case 1: o << "    r = a;\n    if * goto L;\n    r = new T @pk;\n    L: return r;\n"; break;
        default: o << "    if * goto L;\n    return a;\n    L: r = this.f;\n    return r;\n"; break;
    }
    o << "  }\n";
    return o.str();
}

}  // namespace

std::string randomProgram(std::uint64_t seed, int mainStatements) {
    Gen g(seed);
    std::ostringstream o;
    o << "class T {\n  field f: T;\n  field g: T;\n";
    o << setter(g, "set", "f") << getter(g, "get", "f") << pickMethod(g);
    o << "  method put(this, x: T) {\n    this.f = x;\n  }\n";
    o << "  method take(this): T {\n    local r: T;\n    r = this.f;\n    return r;\n  }\n";
    o << "}\n\n";
    o << "class U extends T {\n" << setter(g, "set", "g") << getter(g, "get", "g") << "}\n\n";
    o << "class S {\n";
    o << "  method put(a: T, b: T) {\n    a.g = b;\n  }\n";
    o << "  method id(a: T): T {\n    local r: T;\n    r = a;\n    return r;\n  }\n";
    o << "}\n\n";

    const int nVars = 6;
    std::vector<std::string> vars;
    for (int i = 0; i < nVars; ++i) vars.push_back("v" + std::to_string(i));
    auto v = [&] { return vars[g.pick(nVars)]; };

    std::ostringstream body;
    int site = 0;
    int label = 0;
    int pendingLabel = -1;  // forward target still to be placed
    int untilLabel = 0;
    for (const auto& x : vars) body << "    " << x << " = new " << (g.coin() ? "T" : "U") << " @o" << ++site << ";\n";
    for (int i = 0; i < mainStatements; ++i) {
        std::string prefix = "    ";
        if (pendingLabel >= 0 && --untilLabel <= 0) {
            prefix += "L" + std::to_string(pendingLabel) + ": ";
            pendingLabel = -1;
        }
        std::string stmt;
        switch (g.pick(11)) {
            case 0: stmt = v() + " = new " + (g.coin() ? "T" : "U") + " @o" + std::to_string(++site); break;
            case 1: stmt = v() + " = " + v(); break;
            case 2: stmt = v() + ".set(" + v() + ")"; break;
            case 3: stmt = v() + " = " + v() + ".get()"; break;
            case 4: stmt = v() + "." + (g.coin() ? "f" : "g") + " = " + v(); break;
            case 5: stmt = v() + " = " + v() + "." + (g.coin() ? "f" : "g"); break;
            case 6: stmt = v() + " = " + v() + ".pick(" + v() + ", " + v() + ")"; break;
            case 7: stmt = "S.put(" + v() + ", " + v() + ")"; break;
            case 8: stmt = v() + " = S.id(" + v() + ")"; break;
            case 9: stmt = v() + " = (U) " + v(); break;
            default:
                if (pendingLabel < 0 && i + 2 < mainStatements) {
                    pendingLabel = label++;
                    untilLabel = 1 + g.pick(4);
                    stmt = "if * goto L" + std::to_string(pendingLabel);
                } else {
                    stmt = v() + " = null";
                }
        }
        body << prefix << stmt << ";\n";
    }
    if (pendingLabel >= 0) body << "    L" << pendingLabel << ": ;\n";

    o << "class Main {\n  method main() {\n";
    for (const auto& x : vars) o << "    local " << x << ": T;\n";
    o << body.str() << "  }\n}\n";
    return o.str();
}

}  // namespace testing

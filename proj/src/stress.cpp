#include "pfg/stress.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace pfg::stress {

namespace {

class Builder {
public:
    explicit Builder(std::uint64_t seed) : rng_(seed) {}

    std::string var(const std::string& prefix, const std::string& type) {
        std::string name = prefix + std::to_string(++varCount_);
        locals_.emplace_back(name, type);
        return name;
    }
    std::string site() { return "o" + std::to_string(++siteCount_); }
    void line(const std::string& s) { body_ << "    " << s << ";\n"; }
    unsigned pick(unsigned n) { return static_cast<unsigned>(rng_() % n); }

    std::string alloc(const std::string& prefix, const std::string& type) {
        std::string v = var(prefix, type);
        line(v + " = new " + type + " @" + site());
        return v;
    }

    std::string mainMethod() const {
        std::ostringstream out;
        out << "class Main {\n  method main() {\n";
        for (const auto& [name, type] : locals_) out << "    local " << name << ": " << type << ";\n";
        out << body_.str() << "  }\n}\n";
        return out.str();
    }

    std::vector<std::string> pool;

private:
    std::mt19937_64 rng_;
    int varCount_ = 0;
    int siteCount_ = 0;
    std::vector<std::pair<std::string, std::string>> locals_;
    std::ostringstream body_;
};

void listPair(Builder& b, bool viaIterator) {
    for (int i = 0; i < 2; ++i) {
        std::string l = b.alloc("l", "List");
        std::string e = b.alloc("e", "Object");
        b.line(l + ".add(" + e + ")");
        b.pool.push_back(e);
        if (viaIterator) {
            std::string it = b.var("it", "Iterator");
            b.line(it + " = " + l + ".iterator()");
            b.line(b.var("x", "Object") + " = " + it + ".next()");
        } else {
            b.line(b.var("x", "Object") + " = " + l + ".get()");
        }
    }
}

void mapPair(Builder& b) {
    for (int i = 0; i < 2; ++i) {
        std::string m = b.alloc("m", "Map");
        std::string k = b.alloc("k", "Object");
        std::string v = b.alloc("v", "Object");
        b.line(m + ".put(" + k + ", " + v + ")");
        b.pool.push_back(k);
        b.pool.push_back(v);
        b.line(b.var("x", "Object") + " = " + m + ".get(" + k + ")");
        std::string ks = b.var("ks", "KeySet");
        b.line(ks + " = " + m + ".keySet()");
        std::string ki = b.var("ki", "KeyIterator");
        b.line(ki + " = " + ks + ".iterator()");
        b.line(b.var("x", "Object") + " = " + ki + ".next()");
    }
}

std::string holderClass(int depth) {
    std::ostringstream out;
    out << "class Holder {\n  field v: Object;\n";
    auto setter = [&](const std::string& name, int level) {
        out << "  method " << name << "(this, x: Object) {\n";
        if (level == depth) out << "    this.v = x;\n";
        else out << "    this.set" << level + 1 << "(x);\n";
        out << "  }\n";
    };
    auto getter = [&](const std::string& name, int level) {
        out << "  method " << name << "(this): Object {\n    local r: Object;\n";
        if (level == depth) out << "    r = this.v;\n";
        else out << "    r = this.get" << level + 1 << "();\n";
        out << "    return r;\n  }\n";
    };
    setter("init", 0);
    for (int i = 1; i <= depth; ++i) setter("set" + std::to_string(i), i);
    getter("get", 0);
    for (int i = 1; i <= depth; ++i) getter("get" + std::to_string(i), i);
    out << "}\n";
    return out.str();
}

const char* kUtilClass = R"(class Util {
  method select(p1: Object, p2: Object): Object {
    local r: Object;
    if * goto L;
    r = p1;
    goto E;
    L: r = p2;
    E: return r;
  }
  method pass(p: Object): Object {
    local a: Object;
    local b: Object;
    a = p;
    b = a;
    return b;
  }
}
)";

std::string workerClass(int chain) {
    std::ostringstream out;
    out << "class Worker {\n  method run(this, p: Object) {\n";
    for (int i = 1; i <= chain; ++i) out << "    local c" << i << ": Object;\n";
    for (int i = 1; i <= chain; ++i) {
        out << "    c" << i << " = " << (i == 1 ? std::string("p") : "c" + std::to_string(i - 1)) << ";\n";
    }
    out << "  }\n}\n";
    return out.str();
}

}  // namespace

std::string generate(const StressSpec& spec) {
    Builder b(spec.seed);
    for (int i = 0; i < spec.nContainers; ++i) {
        // The first unit is always the plain add/get shape.
        const unsigned kind = i == 0 ? 0 : b.pick(3);
        if (kind == 2) mapPair(b);
        else listPair(b, kind == 1);
    }
    for (int i = 0; i < spec.nFieldWrappers; ++i) {
        std::string h = b.alloc("h", "Holder");
        std::string e = b.alloc("e", "Object");
        b.line(h + ".init(" + e + ")");
        b.pool.push_back(e);
        if (b.pick(2) == 0) b.line(b.var("x", "Object") + " = " + h + ".get()");
        else b.line(b.var("x", "Object") + " = " + h + ".v");
    }
    for (int i = 0; i < spec.nLocalFlows; ++i) {
        std::string p = b.alloc("a", "Object");
        b.pool.push_back(p);
        if (b.pick(2) == 0) {
            std::string q = b.alloc("a", "Object");
            b.pool.push_back(q);
            b.line(b.var("x", "Object") + " = Util.select(" + p + ", " + q + ")");
        } else {
            b.line(b.var("x", "Object") + " = Util.pass(" + p + ")");
        }
    }
    if (spec.nWorkers > 0) {
        std::string pool = b.var("pool", "Object");
        for (const auto& e : b.pool) b.line(pool + " = " + e);
        for (int i = 0; i < spec.nWorkers; ++i) {
            std::string w = b.alloc("w", "Worker");
            b.line(w + ".run(" + pool + ")");
        }
    }

    std::ostringstream out;
    out << "// generated: seed=" << spec.seed << " containers=" << spec.nContainers
        << " wrappers=" << spec.nFieldWrappers << " localFlows=" << spec.nLocalFlows << " depth=" << spec.depth
        << " workers=" << spec.nWorkers << " chain=" << spec.workerChain << "\n\n";
    out << b.mainMethod() << "\n";
    if (spec.nFieldWrappers > 0) out << holderClass(spec.depth) << "\n";
    if (spec.nLocalFlows > 0) out << kUtilClass << "\n";
    if (spec.nWorkers > 0) out << workerClass(spec.workerChain) << "\n";
    out << containerLibrary();
    return out.str();
}

}  // namespace pfg::stress

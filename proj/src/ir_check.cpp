#include <set>

#include "pfg/ir.hpp"

namespace pfg::ir {

namespace {

class Checker {
public:
    explicit Checker(const Program& p) : p_(p) {}

    std::vector<Diagnostic> run() {
        checkClasses();
        if (hierarchyOk_) {
            for (const auto& cls : p_.classes) {
                for (const auto& m : cls.methods) checkMethod(cls, m);
            }
        }
        checkEntry();
        return std::move(out_);
    }

private:
    void report(std::string where, std::string message) { out_.push_back({std::move(where), std::move(message)}); }

    bool typeKnown(const std::string& t) const { return p_.findClass(t) != nullptr; }

    // Walks the superclass chain collecting fields; assumes an acyclic hierarchy.
    const FieldDef* lookupField(const std::string& type, const std::string& field) const {
        for (const ClassDef* c = p_.findClass(type); c; c = p_.parentOf(*c)) {
            if (const FieldDef* f = c->findField(field)) return f;
        }
        return nullptr;
    }

    void checkClasses() {
        std::set<std::string> names;
        for (const auto& cls : p_.classes) {
            if (cls.name == kObjectClass) report(cls.name, "class 'Object' is predefined");
            if (!names.insert(cls.name).second) report(cls.name, "duplicate class '" + cls.name + "'");
            if (cls.superclass && !typeKnown(*cls.superclass)) {
                report(cls.name, "unknown superclass '" + *cls.superclass + "'");
                hierarchyOk_ = false;
            }
        }
        for (const auto& cls : p_.classes) {
            std::set<const ClassDef*> seen;
            const ClassDef* c = &cls;
            while (c && seen.insert(c).second) c = p_.parentOf(*c);
            if (c) {
                report(cls.name, "inheritance cycle through '" + cls.name + "'");
                hierarchyOk_ = false;
            }
        }
        if (!hierarchyOk_) return;
        for (const auto& cls : p_.classes) {
            std::set<std::string> fields;
            for (const auto& f : cls.fields) {
                if (!fields.insert(f.name).second) report(cls.name, "duplicate field '" + f.name + "'");
                if (!typeKnown(f.type)) report(cls.name + "." + f.name, "unknown type '" + f.type + "'");
                if (const ClassDef* parent = p_.parentOf(cls)) {
                    if (lookupField(parent->name, f.name)) {
                        report(cls.name + "." + f.name, "field '" + f.name + "' shadows an inherited field");
                    }
                }
            }
            std::set<std::string> methods;
            for (const auto& m : cls.methods) {
                const std::string where = cls.name + "." + m.name;
                if (!methods.insert(m.name).second) report(where, "duplicate method '" + m.name + "'");
                for (const auto& prm : m.params) {
                    if (!typeKnown(prm.type)) report(where, "unknown type '" + prm.type + "'");
                }
                for (const auto& l : m.locals) {
                    if (!typeKnown(l.type)) report(where, "unknown type '" + l.type + "'");
                }
                if (m.returnType && !typeKnown(*m.returnType)) {
                    report(where, "unknown type '" + *m.returnType + "'");
                }
                if (const ClassDef* parent = p_.parentOf(cls)) {
                    MethodRef over = dispatch(p_, parent->name, m.name);
                    if (over) {
                        if (over.method->isStatic != m.isStatic) {
                            report(where, "static/instance mismatch with overridden " + over.qualifiedName());
                        } else if (over.method->arity() != m.arity()) {
                            report(where, "arity mismatch with overridden " + over.qualifiedName());
                        }
                    }
                }
            }
        }
    }

    std::optional<std::string> varType(const ClassDef& cls, const MethodDef& m, const std::string& v) const {
        if (!m.isStatic && v == kThis) return cls.name;
        return m.typeOf(v);
    }

    void checkInvoke(const ClassDef& cls, const MethodDef& m, const Stmt& s, const Invoke& inv) {
        const std::string where = s.label;
        const MethodDef* target = nullptr;
        if (inv.kind == InvokeKind::Virtual) {
            auto t = varType(cls, m, inv.receiver);
            if (!t || !typeKnown(*t)) return;
            MethodRef ref = dispatch(p_, *t, inv.method);
            if (!ref) {
                report(where, "type '" + *t + "' has no method '" + inv.method + "'");
                return;
            }
            if (ref.method->isStatic) {
                report(where, "virtual call to static method " + ref.qualifiedName());
                return;
            }
            target = ref.method;
        } else {
            const ClassDef* owner = p_.findClass(inv.receiver);
            if (!owner) {
                report(where, "unknown class or variable '" + inv.receiver + "'");
                return;
            }
            target = owner->findMethod(inv.method);
            if (!target) {
                report(where, "class '" + inv.receiver + "' has no method '" + inv.method + "'");
                return;
            }
            if (!target->isStatic) {
                report(where, "static call to instance method " + inv.receiver + "." + inv.method);
                return;
            }
        }
        if (target->arity() != static_cast<int>(inv.args.size())) {
            report(where, "arity mismatch calling '" + inv.method + "': expected " + std::to_string(target->arity()) +
                              ", got " + std::to_string(inv.args.size()));
        }
        if (inv.lhs && !target->retVar) {
            report(where, "method '" + inv.method + "' returns no value");
        }
    }

    void checkMethod(const ClassDef& cls, const MethodDef& m) {
        std::set<std::string> marks;
        for (const auto& s : m.body) {
            if (s.mark) marks.insert(*s.mark);
        }
        for (const auto& s : m.body) {
            const std::string& where = s.label;
            std::visit(
                [&](const auto& b) {
                    using T = std::decay_t<decltype(b)>;
                    if constexpr (std::is_same_v<T, New> || std::is_same_v<T, Cast>) {
                        if (!typeKnown(b.type)) report(where, "unknown type '" + b.type + "'");
                    }
                    if constexpr (std::is_same_v<T, Store> || std::is_same_v<T, Load>) {
                        auto t = varType(cls, m, b.base);
                        if (t && typeKnown(*t) && !lookupField(*t, b.field)) {
                            report(where, "type '" + *t + "' has no field '" + b.field + "'");
                        }
                    }
                    if constexpr (std::is_same_v<T, Invoke>) checkInvoke(cls, m, s, b);
                    if constexpr (std::is_same_v<T, BranchNondet> || std::is_same_v<T, Goto>) {
                        if (!marks.count(b.target)) report(where, "unresolved jump label '" + b.target + "'");
                    }
                    if constexpr (std::is_same_v<T, Return>) {
                        if (b.var && !m.returnType) report(where, "value returned from method without return type");
                    }
                },
                s.body);
        }
    }

    void checkEntry() {
        const MethodDef* e = p_.findMethod(p_.entry);
        if (!e) {
            report(p_.entry, "entry method '" + p_.entry + "' not found");
        } else if (e->arity() != 0) {
            report(p_.entry, "entry method must take no arguments");
        }
    }

    const Program& p_;
    std::vector<Diagnostic> out_;
    bool hierarchyOk_ = true;
};

}  // namespace

std::vector<Diagnostic> checkProgram(const Program& program) { return Checker(program).run(); }

}  // namespace pfg::ir

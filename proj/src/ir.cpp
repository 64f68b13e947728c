#include "pfg/ir.hpp"

#include <algorithm>
#include <set>

namespace pfg::ir {

namespace {

const ClassDef& objectClass() {
    static const ClassDef root{std::string(kObjectClass), std::nullopt, {}, {}};
    return root;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::optional<std::string> Invoke::argAt(int k) const {
    if (k == 0) {
        if (kind == InvokeKind::Virtual) return receiver;
        return std::nullopt;
    }
    if (k < 0 || k > static_cast<int>(args.size())) return std::nullopt;
    return args[k - 1];
}

std::optional<std::string> Stmt::definedVar() const {
    return std::visit(
        Overloaded{
            [](const New& s) -> std::optional<std::string> { return s.lhs; },
            [](const Assign& s) -> std::optional<std::string> { return s.lhs; },
            [](const AssignNull& s) -> std::optional<std::string> { return s.lhs; },
            [](const Load& s) -> std::optional<std::string> { return s.lhs; },
            [](const Invoke& s) -> std::optional<std::string> { return s.lhs; },
            [](const Cast& s) -> std::optional<std::string> { return s.lhs; },
            [](const auto&) -> std::optional<std::string> { return std::nullopt; },
        },
        body);
}

std::string_view stmtKindName(const Stmt& stmt) {
    static constexpr std::string_view names[] = {"new",    "assign", "assign-null", "store",
                                                 "load",   "invoke", "cast",        "return",
                                                 "branch", "goto",   "nop"};
    return names[stmt.body.index()];
}

std::optional<std::string> MethodDef::paramAt(int k) const {
    if (k == 0) {
        if (isStatic) return std::nullopt;
        return std::string(kThis);
    }
    if (k < 0 || k > arity()) return std::nullopt;
    return params[k - 1].name;
}

std::optional<int> MethodDef::paramIndex(std::string_view var) const {
    if (!isStatic && var == kThis) return 0;
    for (int i = 0; i < arity(); ++i) {
        if (params[i].name == var) return i + 1;
    }
    return std::nullopt;
}

bool MethodDef::hasVar(std::string_view var) const {
    return paramIndex(var).has_value() || typeOf(var).has_value();
}

std::optional<std::string> MethodDef::typeOf(std::string_view var) const {
    if (!isStatic && var == kThis) return std::nullopt;  // resolved by the owner
    for (const auto& p : params) {
        if (p.name == var) return p.type;
    }
    for (const auto& l : locals) {
        if (l.name == var) return l.type;
    }
    return std::nullopt;
}

const Stmt* MethodDef::findStmt(std::string_view label) const {
    for (const auto& s : body) {
        if (s.label == label) return &s;
    }
    return nullptr;
}

const MethodDef* ClassDef::findMethod(std::string_view method) const {
    for (const auto& m : methods) {
        if (m.name == method) return &m;
    }
    return nullptr;
}

const FieldDef* ClassDef::findField(std::string_view field) const {
    for (const auto& f : fields) {
        if (f.name == field) return &f;
    }
    return nullptr;
}

const ClassDef* Program::findClass(std::string_view name) const {
    for (const auto& c : classes) {
        if (c.name == name) return &c;
    }
    if (name == kObjectClass) return &objectClass();
    return nullptr;
}

const MethodDef* Program::findMethod(std::string_view qualified) const {
    const auto dot = qualified.find('.');
    if (dot == std::string_view::npos) return nullptr;
    const ClassDef* cls = findClass(qualified.substr(0, dot));
    return cls ? cls->findMethod(qualified.substr(dot + 1)) : nullptr;
}

const ClassDef* Program::parentOf(const ClassDef& cls) const {
    if (cls.name == kObjectClass) return nullptr;
    if (!cls.superclass) return &objectClass();
    return findClass(*cls.superclass);
}

std::string MethodRef::qualifiedName() const {
    if (!method) return {};
    return owner->name + "." + method->name;
}

MethodRef dispatch(const Program& program, std::string_view type, std::string_view method) {
    const ClassDef* cls = program.findClass(type);
    if (!cls) throw Error(ErrorKind::Unresolved, "unknown type '" + std::string(type) + "'");
    std::set<const ClassDef*> seen;
    while (cls && seen.insert(cls).second) {
        if (const MethodDef* m = cls->findMethod(method)) return {cls, m};
        cls = program.parentOf(*cls);
    }
    return {};
}

std::vector<std::string> defStatements(const MethodDef& method, std::string_view var) {
    if (!method.hasVar(var)) {
        throw Error(ErrorKind::Unresolved,
                    "unknown variable '" + std::string(var) + "' in method " + method.name);
    }
    std::vector<std::string> out;
    for (const auto& s : method.body) {
        if (auto d = s.definedVar(); d && *d == var) out.push_back(s.label);
    }
    return out;
}

bool subtypeOf(const Program& program, std::string_view sub, std::string_view super) {
    const ClassDef* cls = program.findClass(sub);
    if (!cls) throw Error(ErrorKind::Unresolved, "unknown type '" + std::string(sub) + "'");
    if (!program.findClass(super)) {
        throw Error(ErrorKind::Unresolved, "unknown type '" + std::string(super) + "'");
    }
    std::set<const ClassDef*> seen;
    while (cls && seen.insert(cls).second) {
        if (cls->name == super) return true;
        cls = program.parentOf(*cls);
    }
    return false;
}

// ---------------------------------------------------------------------------
// ProgramIndex

ProgramIndex::VarId ProgramIndex::MethodInfo::var(std::string_view name) const {
    auto it = varIds.find(std::string(name));
    if (it == varIds.end()) {
        throw Error(ErrorKind::Unresolved, "unknown variable '" + std::string(name) + "' in " + qname);
    }
    return it->second;
}

std::optional<ProgramIndex::VarId> ProgramIndex::MethodInfo::paramVar(int k) const {
    auto name = def->paramAt(k);
    if (!name) return std::nullopt;
    return var(*name);
}

std::optional<int> ProgramIndex::MethodInfo::paramIndexOf(VarId v) const {
    return def->paramIndex(vars[v]);
}

ProgramIndex::ProgramIndex(const Program& program) : program_(&program) {
    typeNames_.emplace_back(kObjectClass);
    for (const auto& c : program.classes) {
        if (c.name != kObjectClass) typeNames_.push_back(c.name);
    }
    for (TypeId t = 0; t < typeNames_.size(); ++t) typeIds_[typeNames_[t]] = t;

    subtype_.assign(typeNames_.size(), std::vector<bool>(typeNames_.size(), false));
    for (TypeId t = 0; t < typeNames_.size(); ++t) {
        const ClassDef* cls = program.findClass(typeNames_[t]);
        std::set<const ClassDef*> seen;
        while (cls && seen.insert(cls).second) {
            if (auto id = typeId(cls->name)) subtype_[t][*id] = true;
            cls = program.parentOf(*cls);
        }
    }

    auto internField = [this](const std::string& f) {
        if (fieldIds_.emplace(f, static_cast<FieldId>(fieldNames_.size())).second) {
            fieldNames_.push_back(f);
        }
    };

    for (const auto& cls : program.classes) {
        for (const auto& f : cls.fields) internField(f.name);
        for (const auto& m : cls.methods) {
            MethodInfo info;
            info.owner = &cls;
            info.def = &m;
            info.qname = cls.name + "." + m.name;
            auto addVar = [&info](const std::string& name) {
                if (info.varIds.emplace(name, static_cast<VarId>(info.vars.size())).second) {
                    info.vars.push_back(name);
                }
            };
            if (!m.isStatic) addVar(std::string(kThis));
            for (const auto& p : m.params) addVar(p.name);
            for (const auto& l : m.locals) addVar(l.name);
            info.defs.resize(info.vars.size());
            for (std::uint32_t i = 0; i < m.body.size(); ++i) {
                const Stmt& s = m.body[i];
                if (auto d = s.definedVar()) {
                    auto it = info.varIds.find(*d);
                    if (it != info.varIds.end()) info.defs[it->second].push_back(i);
                }
                if (const auto* st = s.as<Store>()) internField(st->field);
                if (const auto* ld = s.as<Load>()) internField(ld->field);
            }
            if (m.retVar) {
                auto it = info.varIds.find(*m.retVar);
                if (it != info.varIds.end()) info.retVar = it->second;
            }
            const auto id = static_cast<MethodId>(methods_.size());
            methodIds_[info.qname] = id;
            byName_[{m.name, m.arity()}].push_back(id);
            methods_.push_back(std::move(info));
        }
    }

    for (MethodId mid = 0; mid < methods_.size(); ++mid) {
        const auto& body = methods_[mid].def->body;
        for (std::uint32_t i = 0; i < body.size(); ++i) {
            if (const auto* n = body[i].as<New>()) {
                SiteInfo site;
                site.label = body[i].label;
                site.type = typeId(n->type).value_or(0);
                site.method = mid;
                site.stmt = i;
                siteIds_[site.label] = static_cast<SiteId>(sites_.size());
                sites_.push_back(std::move(site));
            }
        }
    }

    for (TypeId t = 0; t < typeNames_.size(); ++t) {
        const ClassDef* cls = program.findClass(typeNames_[t]);
        std::set<const ClassDef*> seen;
        for (const ClassDef* c = cls; c && seen.insert(c).second; c = program.parentOf(*c)) {
            for (const auto& m : c->methods) {
                auto key = std::make_pair(t, m.name);
                if (dispatchTable_.count(key)) continue;
                dispatchTable_[key] = methodId(c->name + "." + m.name);
            }
        }
    }

    if (auto e = methodId(program.entry)) {
        entry_ = *e;
    } else {
        throw Error(ErrorKind::Unresolved, "entry method '" + program.entry + "' not found");
    }
}

std::optional<ProgramIndex::MethodId> ProgramIndex::methodId(std::string_view qname) const {
    auto it = methodIds_.find(std::string(qname));
    if (it == methodIds_.end()) return std::nullopt;
    return it->second;
}

std::optional<ProgramIndex::SiteId> ProgramIndex::siteId(std::string_view label) const {
    auto it = siteIds_.find(std::string(label));
    if (it == siteIds_.end()) return std::nullopt;
    return it->second;
}

ProgramIndex::FieldId ProgramIndex::fieldId(std::string_view name) const {
    auto it = fieldIds_.find(std::string(name));
    if (it == fieldIds_.end()) {
        throw Error(ErrorKind::Unresolved, "unknown field '" + std::string(name) + "'");
    }
    return it->second;
}

std::optional<ProgramIndex::TypeId> ProgramIndex::typeId(std::string_view name) const {
    auto it = typeIds_.find(std::string(name));
    if (it == typeIds_.end()) return std::nullopt;
    return it->second;
}

bool ProgramIndex::subtype(TypeId sub, TypeId super) const { return subtype_[sub][super]; }

std::optional<ProgramIndex::MethodId> ProgramIndex::dispatch(TypeId type, std::string_view method) const {
    auto it = dispatchTable_.find(std::make_pair(type, std::string(method)));
    if (it == dispatchTable_.end()) return std::nullopt;
    return it->second;
}

const std::vector<ProgramIndex::MethodId>& ProgramIndex::methodsNamed(std::string_view method, int arity) const {
    static const std::vector<MethodId> none;
    auto it = byName_.find(std::make_pair(std::string(method), arity));
    return it == byName_.end() ? none : it->second;
}

}  // namespace pfg::ir

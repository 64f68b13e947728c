#pragma once

// Mini object-oriented IR: classes with single inheritance, instance fields,
// instance/static methods, and the statement forms pointer analysis cares
// about. Allocation sites carry explicit labels (`x = new T @o1;`).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pfg/error.hpp"

namespace pfg::ir {

inline constexpr std::string_view kObjectClass = "Object";
inline constexpr std::string_view kThis = "this";

struct New {
    std::string lhs;
    std::string type;
    bool operator==(const New&) const = default;
};
struct Assign {
    std::string lhs;
    std::string rhs;
    bool operator==(const Assign&) const = default;
};
struct AssignNull {
    std::string lhs;
    bool operator==(const AssignNull&) const = default;
};
struct Store {
    std::string base;
    std::string field;
    std::string rhs;
    bool operator==(const Store&) const = default;
};
struct Load {
    std::string lhs;
    std::string base;
    std::string field;
    bool operator==(const Load&) const = default;
};

enum class InvokeKind { Virtual, Static };

struct Invoke {
    std::optional<std::string> lhs;
    InvokeKind kind = InvokeKind::Virtual;
    // Receiver variable for virtual calls, class name for static calls.
    std::string receiver;
    std::string method;
    std::vector<std::string> args;

    // Argument k of the call site; k = 0 is the receiver of a virtual call.
    std::optional<std::string> argAt(int k) const;
    bool operator==(const Invoke&) const = default;
};
struct Cast {
    std::string lhs;
    std::string type;
    std::string rhs;
    bool operator==(const Cast&) const = default;
};
struct Return {
    std::optional<std::string> var;
    bool operator==(const Return&) const = default;
};
struct BranchNondet {
    std::string target;
    bool operator==(const BranchNondet&) const = default;
};
struct Goto {
    std::string target;
    bool operator==(const Goto&) const = default;
};
struct Nop {
    bool operator==(const Nop&) const = default;
};

using StmtBody =
    std::variant<New, Assign, AssignNull, Store, Load, Invoke, Cast, Return, BranchNondet, Goto, Nop>;

struct Stmt {
    // Program-wide unique. For `New` this is the allocation-site label.
    std::string label;
    // Jump target name (`L:`), local to the enclosing method.
    std::optional<std::string> mark;
    StmtBody body;
    SourceLoc loc;

    template <class T>
    const T* as() const { return std::get_if<T>(&body); }

    // Variable written by the statement, if any.
    std::optional<std::string> definedVar() const;

    friend bool operator==(const Stmt& a, const Stmt& b) {
        return a.label == b.label && a.mark == b.mark && a.body == b.body;
    }
};

struct Param {
    std::string name;
    std::string type;
    bool operator==(const Param&) const = default;
};

struct MethodDef {
    std::string name;
    bool isStatic = false;
    // Formal parameters excluding the receiver.
    std::vector<Param> params;
    std::optional<std::string> returnType;
    std::vector<Param> locals;
    std::vector<Stmt> body;
    std::optional<std::string> retVar;

    int arity() const { return static_cast<int>(params.size()); }
    // Parameter k; k = 0 is `this` for instance methods, absent for static ones.
    std::optional<std::string> paramAt(int k) const;
    // Index of `var` among the parameters, if it is one.
    std::optional<int> paramIndex(std::string_view var) const;
    bool hasVar(std::string_view var) const;
    std::optional<std::string> typeOf(std::string_view var) const;
    const Stmt* findStmt(std::string_view label) const;

    bool operator==(const MethodDef&) const = default;
};

struct FieldDef {
    std::string name;
    std::string type;
    bool operator==(const FieldDef&) const = default;
};

struct ClassDef {
    std::string name;
    std::optional<std::string> superclass;
    std::vector<FieldDef> fields;
    std::vector<MethodDef> methods;

    const MethodDef* findMethod(std::string_view method) const;
    const FieldDef* findField(std::string_view field) const;
    bool operator==(const ClassDef&) const = default;
};

struct Program {
    std::vector<ClassDef> classes;
    std::string entry = "Main.main";

    // `Object` resolves to the implicit root class.
    const ClassDef* findClass(std::string_view name) const;
    // Looks up "Class.method" without walking superclasses.
    const MethodDef* findMethod(std::string_view qualified) const;
    // Superclass of `cls`; `Object` for classes without an explicit parent.
    const ClassDef* parentOf(const ClassDef& cls) const;
    bool operator==(const Program&) const = default;
};

struct MethodRef {
    const ClassDef* owner = nullptr;
    const MethodDef* method = nullptr;

    explicit operator bool() const { return method != nullptr; }
    std::string qualifiedName() const;
};

struct Diagnostic {
    std::string where;
    std::string message;
    bool operator==(const Diagnostic&) const = default;
};

Program parseProgram(std::string_view text);
std::string printProgram(const Program& program);
std::vector<Diagnostic> checkProgram(const Program& program);

// Walks from `type` up the superclass chain looking for `method`.
MethodRef dispatch(const Program& program, std::string_view type, std::string_view method);

// Labels of the statements of `method` that write `var`; parameter binding
// does not count. Throws on an unknown variable.
std::vector<std::string> defStatements(const MethodDef& method, std::string_view var);

// Reflexive-transitive superclass relation. Throws on unknown types.
bool subtypeOf(const Program& program, std::string_view sub, std::string_view super);

std::string_view stmtKindName(const Stmt& stmt);

// Dense numbering of methods, variables, allocation sites and fields, built
// once per (checked) program and shared by the analyses.
class ProgramIndex {
public:
    using MethodId = std::uint32_t;
    using VarId = std::uint32_t;
    using SiteId = std::uint32_t;
    using FieldId = std::uint32_t;
    using TypeId = std::uint32_t;

    struct MethodInfo {
        const ClassDef* owner = nullptr;
        const MethodDef* def = nullptr;
        std::string qname;
        std::vector<std::string> vars;  // params (with `this` first), then locals
        std::unordered_map<std::string, VarId> varIds;
        std::vector<std::vector<std::uint32_t>> defs;  // var -> defining stmt indices
        std::optional<VarId> retVar;

        VarId var(std::string_view name) const;
        std::optional<VarId> paramVar(int k) const;
        std::optional<int> paramIndexOf(VarId v) const;
        bool unredefined(VarId v) const { return defs[v].empty(); }
    };

    struct SiteInfo {
        std::string label;
        TypeId type = 0;
        MethodId method = 0;
        std::uint32_t stmt = 0;
    };

    explicit ProgramIndex(const Program& program);

    const Program& program() const { return *program_; }
    const std::vector<MethodInfo>& methods() const { return methods_; }
    const MethodInfo& method(MethodId id) const { return methods_[id]; }
    std::optional<MethodId> methodId(std::string_view qname) const;
    MethodId entry() const { return entry_; }

    const std::vector<SiteInfo>& sites() const { return sites_; }
    const SiteInfo& site(SiteId id) const { return sites_[id]; }
    std::optional<SiteId> siteId(std::string_view label) const;

    FieldId fieldId(std::string_view name) const;
    const std::string& fieldName(FieldId id) const { return fieldNames_[id]; }

    const std::string& typeName(TypeId id) const { return typeNames_[id]; }
    std::size_t typeCount() const { return typeNames_.size(); }
    std::optional<TypeId> typeId(std::string_view name) const;
    bool subtype(TypeId sub, TypeId super) const;

    std::optional<MethodId> dispatch(TypeId type, std::string_view method) const;
    // Every method named `method` with the given arity, any class.
    const std::vector<MethodId>& methodsNamed(std::string_view method, int arity) const;

private:
    const Program* program_;
    std::vector<MethodInfo> methods_;
    std::unordered_map<std::string, MethodId> methodIds_;
    MethodId entry_ = 0;
    std::vector<SiteInfo> sites_;
    std::unordered_map<std::string, SiteId> siteIds_;
    std::vector<std::string> fieldNames_;
    std::unordered_map<std::string, FieldId> fieldIds_;
    std::vector<std::string> typeNames_;
    std::unordered_map<std::string, TypeId> typeIds_;
    std::vector<std::vector<bool>> subtype_;
    std::map<std::pair<TypeId, std::string>, std::optional<MethodId>> dispatchTable_;
    std::map<std::pair<std::string, int>, std::vector<MethodId>> byName_;
};

}  // namespace pfg::ir

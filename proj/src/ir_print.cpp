#include <sstream>

#include "pfg/ir.hpp"

namespace pfg::ir {

namespace {

std::string joinArgs(const std::vector<std::string>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i];
    }
    return out;
}

std::string stmtText(const Stmt& s) {
    return std::visit(
        [](const auto& b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, New>) {
                return b.lhs + " = new " + b.type;
            } else if constexpr (std::is_same_v<T, Assign>) {
                return b.lhs + " = " + b.rhs;
            } else if constexpr (std::is_same_v<T, AssignNull>) {
                return b.lhs + " = null";
            } else if constexpr (std::is_same_v<T, Store>) {
                return b.base + "." + b.field + " = " + b.rhs;
            } else if constexpr (std::is_same_v<T, Load>) {
                return b.lhs + " = " + b.base + "." + b.field;
            } else if constexpr (std::is_same_v<T, Invoke>) {
                std::string call = b.receiver + "." + b.method + "(" + joinArgs(b.args) + ")";
                return b.lhs ? *b.lhs + " = " + call : call;
            } else if constexpr (std::is_same_v<T, Cast>) {
                return b.lhs + " = (" + b.type + ") " + b.rhs;
            } else if constexpr (std::is_same_v<T, Return>) {
                return b.var ? "return " + *b.var : std::string("return");
            } else if constexpr (std::is_same_v<T, BranchNondet>) {
                return "if * goto " + b.target;
            } else if constexpr (std::is_same_v<T, Goto>) {
                return "goto " + b.target;
            } else {
                return "";
            }
        },
        s.body);
}

}  // namespace

std::string printProgram(const Program& program) {
    std::ostringstream out;
    bool firstClass = true;
    for (const auto& cls : program.classes) {
        if (!firstClass) out << "\n";
        firstClass = false;
        out << "class " << cls.name;
        if (cls.superclass) out << " extends " << *cls.superclass;
        out << " {\n";
        for (const auto& f : cls.fields) out << "  field " << f.name << ": " << f.type << ";\n";
        for (const auto& m : cls.methods) {
            out << "  method " << m.name << "(";
            bool first = true;
            if (!m.isStatic) {
                out << kThis;
                first = false;
            }
            for (const auto& p : m.params) {
                if (!first) out << ", ";
                first = false;
                out << p.name << ": " << p.type;
            }
            out << ")";
            if (m.returnType) out << ": " << *m.returnType;
            out << " {\n";
            for (const auto& l : m.locals) out << "    local " << l.name << ": " << l.type << ";\n";
            for (std::size_t i = 0; i < m.body.size(); ++i) {
                const Stmt& s = m.body[i];
                out << "    ";
                if (s.mark) out << *s.mark << ": ";
                std::string text = stmtText(s);
                out << text;
                const std::string autoLabel = cls.name + "." + m.name + "#" + std::to_string(i);
                if (!s.label.empty() && s.label != autoLabel) out << " @" << s.label;
                out << ";\n";
            }
            out << "  }\n";
        }
        out << "}\n";
    }
    return out.str();
}

}  // namespace pfg::ir

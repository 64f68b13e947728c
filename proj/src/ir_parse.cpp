#include <cctype>
#include <set>
#include <unordered_map>

#include "pfg/ir.hpp"

namespace pfg::ir {

namespace {

enum class Tok { Ident, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLoc loc;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.loc = {line, col};
        if (identStart(c) || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && identChar(text[j])) ++j;
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::string_view("{}():;,.=@*").find(c) != std::string_view::npos) {
            tok.kind = Tok::Punct;
            tok.text = std::string(1, c);
            advance(1);
        } else {
            throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", tok.loc);
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.loc = {line, col};
    out.push_back(end);
    return out;
}

const std::set<std::string, std::less<>> kKeywords = {"class", "extends", "field", "method", "local",
                                                      "new",   "null",    "if",    "goto",   "return"};

// Invoke receivers are parsed as bare names and resolved to a variable or a
// class once the enclosing method's declarations are known.
struct PendingInvoke {
    std::size_t stmt;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program parse() {
        Program program;
        while (!atEnd()) program.classes.push_back(parseClass());
        assignLabels(program);
        return program;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool atEnd() const { return peek().kind == Tok::End; }
    bool isPunct(const Token& t, char c) const { return t.kind == Tok::Punct && t.text[0] == c; }
    bool isWord(const Token& t, std::string_view w) const { return t.kind == Tok::Ident && t.text == w; }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw Error(ErrorKind::Syntax, msg, at.loc);
    }

    void expectPunct(char c) {
        if (!isPunct(peek(), c)) {
            fail(std::string("expected '") + c + "' but found '" + describe(peek()) + "'", peek());
        }
        ++pos_;
    }
    void expectWord(std::string_view w) {
        if (!isWord(peek(), w)) fail("expected '" + std::string(w) + "' but found '" + describe(peek()) + "'", peek());
        ++pos_;
    }
    bool acceptPunct(char c) {
        if (isPunct(peek(), c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string describe(const Token& t) const { return t.kind == Tok::End ? "end of input" : t.text; }

    std::string ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || kKeywords.count(t.text) ||
            std::isdigit(static_cast<unsigned char>(t.text[0]))) {
            fail(std::string("expected ") + what + " but found '" + describe(t) + "'", t);
        }
        ++pos_;
        return t.text;
    }

    // Labels may start with a digit (`@12`) since they are never expressions.
    std::string labelName() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("expected label after '@'", t);
        ++pos_;
        return t.text;
    }

    ClassDef parseClass() {
        expectWord("class");
        ClassDef cls;
        cls.name = ident("class name");
        if (isWord(peek(), "extends")) {
            ++pos_;
            cls.superclass = ident("superclass name");
        }
        expectPunct('{');
        while (!isPunct(peek(), '}')) {
            if (atEnd()) fail("unterminated class body", peek());
            if (isWord(peek(), "field")) {
                ++pos_;
                FieldDef f;
                f.name = ident("field name");
                expectPunct(':');
                f.type = ident("field type");
                expectPunct(';');
                cls.fields.push_back(std::move(f));
            } else if (isWord(peek(), "method")) {
                cls.methods.push_back(parseMethod(cls.name));
            } else {
                fail("expected 'field' or 'method' but found '" + describe(peek()) + "'", peek());
            }
        }
        expectPunct('}');
        return cls;
    }

    MethodDef parseMethod(const std::string& owner) {
        expectWord("method");
        MethodDef m;
        m.name = ident("method name");
        expectPunct('(');
        m.isStatic = true;
        if (!isPunct(peek(), ')')) {
            if (isWord(peek(), kThis)) {
                ++pos_;
                m.isStatic = false;
            } else {
                m.params.push_back(parseParam());
            }
            while (acceptPunct(',')) m.params.push_back(parseParam());
        }
        expectPunct(')');
        if (acceptPunct(':')) {
            const Token& t = peek();
            std::string type = ident("return type");
            if (type != "void") m.returnType = type;
            (void)t;
        }
        expectPunct('{');
        std::vector<PendingInvoke> pending;
        std::vector<std::pair<std::string, SourceLoc>> gotos;
        std::optional<std::string> mark;
        SourceLoc markLoc;
        while (!isPunct(peek(), '}')) {
            if (atEnd()) fail("unterminated method body", peek());
            if (isWord(peek(), "local")) {
                ++pos_;
                Param l;
                l.name = ident("local name");
                expectPunct(':');
                l.type = ident("local type");
                expectPunct(';');
                m.locals.push_back(std::move(l));
                continue;
            }
            // `L:` prefix
            if (peek().kind == Tok::Ident && !kKeywords.count(peek().text) && isPunct(peek(1), ':')) {
                if (mark) {
                    // Two marks in a row: the first one labels an empty statement.
                    Stmt nop{"", mark, Nop{}, markLoc};
                    m.body.push_back(std::move(nop));
                }
                markLoc = peek().loc;
                mark = peek().text;
                pos_ += 2;
                if (isPunct(peek(), ';')) {
                    ++pos_;
                    m.body.push_back(Stmt{"", mark, Nop{}, markLoc});
                    mark.reset();
                }
                continue;
            }
            Stmt s = parseStmt(pending, m.body.size(), gotos);
            if (mark) {
                s.mark = mark;
                mark.reset();
            }
            m.body.push_back(std::move(s));
        }
        if (mark) m.body.push_back(Stmt{"", mark, Nop{}, markLoc});
        expectPunct('}');

        resolveNames(owner, m, pending);

        std::set<std::string> marks;
        for (const auto& s : m.body) {
            if (s.mark && !marks.insert(*s.mark).second) {
                throw Error(ErrorKind::DuplicateLabel, "duplicate jump label '" + *s.mark + "' in " + owner + "." + m.name,
                            s.loc);
            }
        }
        for (const auto& [target, loc] : gotos) {
            if (!marks.count(target)) {
                throw Error(ErrorKind::Unresolved, "unresolved jump label '" + target + "' in " + owner + "." + m.name,
                            loc);
            }
        }
        normalizeReturns(m);
        return m;
    }

    Param parseParam() {
        Param p;
        p.name = ident("parameter name");
        expectPunct(':');
        p.type = ident("parameter type");
        return p;
    }

    std::vector<std::string> parseArgs() {
        std::vector<std::string> args;
        expectPunct('(');
        if (!isPunct(peek(), ')')) {
            args.push_back(varName());
            while (acceptPunct(',')) args.push_back(varName());
        }
        expectPunct(')');
        return args;
    }

    std::string varName() {
        if (isWord(peek(), kThis)) {
            ++pos_;
            return std::string(kThis);
        }
        return ident("variable");
    }

    Stmt parseStmt(std::vector<PendingInvoke>& pending, std::size_t index,
                   std::vector<std::pair<std::string, SourceLoc>>& gotos) {
        Stmt s;
        s.loc = peek().loc;
        if (isWord(peek(), "if")) {
            ++pos_;
            expectPunct('*');
            expectWord("goto");
            SourceLoc at = peek().loc;
            std::string target = ident("jump label");
            gotos.emplace_back(target, at);
            s.body = BranchNondet{target};
        } else if (isWord(peek(), "goto")) {
            ++pos_;
            SourceLoc at = peek().loc;
            std::string target = ident("jump label");
            gotos.emplace_back(target, at);
            s.body = Goto{target};
        } else if (isWord(peek(), "return")) {
            ++pos_;
            Return r;
            if (!isPunct(peek(), ';') && !isPunct(peek(), '@')) r.var = varName();
            s.body = r;
        } else {
            std::string first = varName();
            if (acceptPunct('.')) {
                std::string member = ident("field or method name");
                if (isPunct(peek(), '(')) {
                    Invoke inv;
                    inv.receiver = first;
                    inv.method = member;
                    inv.args = parseArgs();
                    pending.push_back({index});
                    s.body = std::move(inv);
                } else {
                    expectPunct('=');
                    Store st{first, member, varName()};
                    s.body = st;
                }
            } else {
                expectPunct('=');
                s.body = parseRhs(first, pending, index);
            }
        }
        if (acceptPunct('@')) s.label = labelName();
        if (s.as<New>() && s.label.empty()) fail("allocation requires an '@site' label", peek());
        expectPunct(';');
        return s;
    }

    StmtBody parseRhs(const std::string& lhs, std::vector<PendingInvoke>& pending, std::size_t index) {
        if (isWord(peek(), "new")) {
            ++pos_;
            return New{lhs, ident("class name")};
        }
        if (isWord(peek(), "null")) {
            ++pos_;
            return AssignNull{lhs};
        }
        if (acceptPunct('(')) {
            std::string type = ident("cast type");
            expectPunct(')');
            return Cast{lhs, type, varName()};
        }
        std::string base = varName();
        if (acceptPunct('.')) {
            std::string member = ident("field or method name");
            if (isPunct(peek(), '(')) {
                Invoke inv;
                inv.lhs = lhs;
                inv.receiver = base;
                inv.method = member;
                inv.args = parseArgs();
                pending.push_back({index});
                return inv;
            }
            return Load{lhs, base, member};
        }
        return Assign{lhs, base};
    }

    void resolveNames(const std::string& owner, MethodDef& m, const std::vector<PendingInvoke>& pending) {
        std::set<std::string> declared;
        if (!m.isStatic) declared.insert(std::string(kThis));
        for (const auto& p : m.params) {
            if (!declared.insert(p.name).second) {
                throw Error(ErrorKind::DuplicateLabel, "duplicate variable '" + p.name + "' in " + owner + "." + m.name);
            }
        }
        for (const auto& l : m.locals) {
            if (!declared.insert(l.name).second) {
                throw Error(ErrorKind::DuplicateLabel, "duplicate variable '" + l.name + "' in " + owner + "." + m.name);
            }
        }
        for (const auto& pi : pending) {
            auto& inv = std::get<Invoke>(m.body[pi.stmt].body);
            inv.kind = declared.count(inv.receiver) ? InvokeKind::Virtual : InvokeKind::Static;
        }
        auto use = [&](const std::string& v, const Stmt& s) {
            if (!declared.count(v)) {
                throw Error(ErrorKind::Unresolved,
                            "undeclared variable '" + v + "' in " + owner + "." + m.name, s.loc);
            }
        };
        for (const auto& s : m.body) {
            std::visit(
                [&](const auto& b) {
                    using T = std::decay_t<decltype(b)>;
                    if constexpr (std::is_same_v<T, New> || std::is_same_v<T, AssignNull>) {
                        use(b.lhs, s);
                    } else if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, Cast>) {
                        use(b.lhs, s);
                        use(b.rhs, s);
                    } else if constexpr (std::is_same_v<T, Store>) {
                        use(b.base, s);
                        use(b.rhs, s);
                    } else if constexpr (std::is_same_v<T, Load>) {
                        use(b.lhs, s);
                        use(b.base, s);
                    } else if constexpr (std::is_same_v<T, Invoke>) {
                        if (b.lhs) use(*b.lhs, s);
                        for (const auto& a : b.args) use(a, s);
                    } else if constexpr (std::is_same_v<T, Return>) {
                        if (b.var) use(*b.var, s);
                    }
                },
                s.body);
        }
    }

    // Rewrites `return a; ... return b;` into copies to one synthetic variable
    // so that each method has a single return variable.
    static void normalizeReturns(MethodDef& m) {
        std::set<std::string> returned;
        for (const auto& s : m.body) {
            if (const auto* r = s.as<Return>(); r && r->var) returned.insert(*r->var);
        }
        if (returned.empty()) return;
        if (returned.size() == 1) {
            m.retVar = *returned.begin();
            return;
        }
        std::string name = "ret$";
        for (int n = 1; m.hasVar(name); ++n) name = "ret$" + std::to_string(n);
        m.locals.push_back({name, m.returnType.value_or(std::string(kObjectClass))});
        std::vector<Stmt> body;
        for (auto& s : m.body) {
            if (auto* r = std::get_if<Return>(&s.body); r && r->var) {
                Stmt copy;
                copy.mark = std::move(s.mark);
                copy.loc = s.loc;
                copy.body = Assign{name, *r->var};
                s.mark.reset();
                r->var = name;
                body.push_back(std::move(copy));
            }
            body.push_back(std::move(s));
        }
        m.body = std::move(body);
        m.retVar = name;
    }

    static void assignLabels(Program& program) {
        std::unordered_map<std::string, SourceLoc> seen;
        for (auto& cls : program.classes) {
            for (auto& m : cls.methods) {
                for (std::size_t i = 0; i < m.body.size(); ++i) {
                    Stmt& s = m.body[i];
                    if (s.label.empty()) s.label = cls.name + "." + m.name + "#" + std::to_string(i);
                    auto [it, fresh] = seen.emplace(s.label, s.loc);
                    if (!fresh) {
                        throw Error(ErrorKind::DuplicateLabel, "duplicate statement label '" + s.label + "'", s.loc);
                    }
                }
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Program parseProgram(std::string_view text) { return Parser(text).parse(); }

}  // namespace pfg::ir

#include <sstream>
#include <unordered_map>

#include "pfg/solver.hpp"

namespace pfg {

bool pfgReachable(const AnalysisResult& r, const std::string& s, const std::string& t) {
    if (!r.nodes.count(s)) throw Error(ErrorKind::Unresolved, "unknown PFG node '" + s + "'");
    if (!r.nodes.count(t)) throw Error(ErrorKind::Unresolved, "unknown PFG node '" + t + "'");
    if (s == t) return true;
    std::unordered_map<std::string_view, std::vector<std::string_view>> succ;
    for (const auto& e : r.edges) succ[e.source].push_back(e.target);
    std::set<std::string_view> seen{s};
    std::vector<std::string_view> stack{s};
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        auto it = succ.find(n);
        if (it == succ.end()) continue;
        for (auto m : it->second) {
            if (m == t) return true;
            if (seen.insert(m).second) stack.push_back(m);
        }
    }
    return false;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string exportDot(const AnalysisResult& r) {
    std::ostringstream out;
    out << "digraph pfg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& n : r.nodes) {
        std::string label = n;
        auto it = r.pt.find(n);
        if (it != r.pt.end()) {
            label += "\\n{";
            bool first = true;
            for (const auto& o : it->second) {
                if (!first) label += ",";
                first = false;
                label += o;
            }
            label += "}";
        }
        out << "  " << quote(n) << " [label=\"" << label << "\"];\n";
    }
    for (const auto& e : r.edges) {
        out << "  " << quote(e.source) << " -> " << quote(e.target);
        if (e.kind == EdgeKind::Shortcut) {
            out << " [color=blue, penwidth=2, label=" << quote(e.provenance) << "]";
        } else {
            out << " [label=\"" << edgeKindName(e.kind) << "\"]";
        }
        out << ";\n";
    }
    for (const auto& c : r.cutLog) {
        out << "  " << quote(c.source) << " -> " << quote(c.target) << " [style=dashed, color=red, label="
            << quote(std::string(edgeKindName(c.kind)) + " cut by " + c.rule) << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace pfg

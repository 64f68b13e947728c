#include "pfg/clients.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace pfg::clients {

Metrics computeMetrics(const ProgramIndex& index, const AnalysisResult& r) {
    Metrics m;
    m.reachMtd = r.reachable.size();
    m.callEdge = r.callGraph.size();
    for (MethodId mid = 0; mid < index.methods().size(); ++mid) {
        const auto& info = index.method(mid);
        if (!r.reachable.count(info.qname)) continue;
        for (const auto& s : info.def->body) {
            if (const auto* c = s.as<ir::Cast>()) {
                auto target = index.typeId(c->type);
                for (const auto& o : r.ptOf(info.qname + "/" + c->rhs)) {
                    auto site = index.siteId(o);
                    if (!target || !site || !index.subtype(index.site(*site).type, *target)) {
                        m.failCasts.insert(s.label);
                        break;
                    }
                }
            } else if (const auto* inv = s.as<ir::Invoke>()) {
                if (inv->kind != ir::InvokeKind::Virtual) continue;
                std::set<MethodId> targets;
                for (const auto& o : r.ptOf(info.qname + "/" + inv->receiver)) {
                    auto site = index.siteId(o);
                    if (!site) continue;
                    if (auto callee = index.dispatch(index.site(*site).type, inv->method)) targets.insert(*callee);
                }
                if (targets.size() >= 2) m.polyCalls.insert(s.label);
            }
        }
    }
    return m;
}

std::size_t metricValue(const Metrics& m, int which) {
    switch (which) {
        case 0: return m.failCast();
        case 1: return m.reachMtd;
        case 2: return m.polyCall();
        default: return m.callEdge;
    }
}

bool dominates(const Metrics& a, const Metrics& b) {
    for (int i = 0; i < 4; ++i) {
        if (metricValue(a, i) > metricValue(b, i)) return false;
    }
    return true;
}

Comparison compareMetrics(std::vector<std::pair<std::string, Metrics>> rows) {
    Comparison c;
    c.rows = std::move(rows);
    for (std::size_t i = 1; i < c.rows.size(); ++i) {
        std::vector<Relation> rel;
        for (int k = 0; k < 4; ++k) {
            const auto a = metricValue(c.rows[i].second, k);
            const auto b = metricValue(c.rows[0].second, k);
            rel.push_back(a < b ? Relation::Less : a == b ? Relation::Equal : Relation::Greater);
        }
        c.relations.push_back(std::move(rel));
        c.dominatesBase.push_back(dominates(c.rows[i].second, c.rows[0].second));
    }
    return c;
}

namespace {

const char* relationMark(Relation r) {
    switch (r) {
        case Relation::Less: return "<";
        case Relation::Equal: return "=";
        default: return ">";
    }
}

}  // namespace

std::string renderTable(const Comparison& c) {
    std::size_t nameWidth = 8;
    for (const auto& [name, m] : c.rows) nameWidth = std::max(nameWidth, name.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(nameWidth)) << "analysis";
    for (const char* n : kMetricNames) out << "  " << std::right << std::setw(12) << n;
    if (c.rows.size() > 1) out << "  dominates " << c.rows[0].first;
    out << "\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        out << std::left << std::setw(static_cast<int>(nameWidth)) << c.rows[i].first;
        for (int k = 0; k < 4; ++k) {
            std::string cell = std::to_string(metricValue(c.rows[i].second, k));
            if (i > 0) cell += std::string(" ") + relationMark(c.relations[i - 1][k]);
            else if (c.rows.size() > 1) cell += "  ";
            out << "  " << std::right << std::setw(12) << cell;
        }
        if (i > 0) out << "  " << (c.dominatesBase[i - 1] ? "yes" : "no");
        out << "\n";
    }
    return out.str();
}

std::string renderCsv(const Comparison& c) {
    std::ostringstream out;
    out << "analysis";
    for (const char* n : kMetricNames) out << "," << n;
    out << ",dominatesBase\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        out << c.rows[i].first;
        for (int k = 0; k < 4; ++k) out << "," << metricValue(c.rows[i].second, k);
        out << "," << (i == 0 ? "" : c.dominatesBase[i - 1] ? "true" : "false") << "\n";
    }
    return out.str();
}

std::vector<std::string> checkDominance(const AnalysisResult& r, const AnalysisResult& base) {
    std::vector<std::string> out;
    for (const auto& [p, objs] : r.pt) {
        const auto& b = base.ptOf(p);
        for (const auto& o : objs) {
            if (!b.count(o)) out.push_back("pt(" + p + ") has " + o + " beyond the baseline");
        }
    }
    return out;
}

std::string reportJson(const AnalysisResult& r, const Metrics& m, bool timedOut) {
    using nlohmann::json;
    json j = json::object();
    json pt = json::object();
    for (const auto& [p, objs] : r.pt) {
        if (!objs.empty()) pt[p] = objs;
    }
    j["pt"] = pt;
    j["callEdges"] = json::array();
    for (const auto& [site, callee] : r.callGraph) j["callEdges"].push_back({site, callee});
    j["reachable"] = r.reachable;
    j["cutLog"] = json::array();
    for (const auto& c : r.cutLog) {
        j["cutLog"].push_back({{"source", c.source},
                               {"target", c.target},
                               {"kind", std::string(edgeKindName(c.kind))},
                               {"rule", c.rule}});
    }
    j["shortcuts"] = json::array();
    for (const auto& e : r.shortcuts) {
        j["shortcuts"].push_back({{"source", e.source}, {"target", e.target}, {"rule", e.provenance}});
    }
    json hosts = json::object();
    for (const auto& [p, objs] : r.hosts) hosts[p] = objs;
    j["hosts"] = hosts;
    j["diagnostics"] = json::array();
    for (const auto& d : r.diagnostics) j["diagnostics"].push_back({{"where", d.where}, {"message", d.message}});
    j["metrics"] = {{"failCast", m.failCast()},
                    {"failCasts", m.failCasts},
                    {"reachMtd", m.reachMtd},
                    {"polyCall", m.polyCall()},
                    {"polyCalls", m.polyCalls},
                    {"callEdge", m.callEdge}};
    if (timedOut) j["timedOut"] = true;
    return j.dump(2) + "\n";
}

}  // namespace pfg::clients

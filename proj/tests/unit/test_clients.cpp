#include <doctest.h>

#include <json.hpp>

#include "analyses.hpp"
#include "corpus.hpp"
#include "pfg/clients.hpp"

using namespace pfg;
using namespace pfg::clients;

TEST_SUITE("clients") {

TEST_CASE("probe metrics: CI against CSC on fig1") {
    auto l = testing::loadFile("paper/fig1_probe.ir");
    auto ci = computeMetrics(*l.index, solveCI(*l.index));
    auto csc = computeMetrics(*l.index, testing::runAnalysis(l, "csc").result);
    CHECK(ci.failCast() == 2);
    CHECK(ci.polyCall() == 1);
    CHECK(csc.failCast() == 0);
    CHECK(csc.polyCall() == 0);
    CHECK(csc.reachMtd < ci.reachMtd);
    CHECK(csc.callEdge < ci.callEdge);
    CHECK(dominates(csc, ci));
    CHECK(!dominates(ci, csc));
}

TEST_CASE("plain figures have no casts or virtual polymorphism") {
    for (const char* fig : {"paper/fig1.ir", "paper/fig3.ir", "paper/fig5.ir"}) {
        auto l = testing::loadFile(fig);
        auto m = computeMetrics(*l.index, solveCI(*l.index));
        CHECK(m.failCast() == 0);
        CHECK(m.polyCall() == 0);
    }
}

TEST_CASE("comparison table marks each metric against the first row") {
    Metrics a, b;
    a.failCasts = {"c1", "c2"};
    a.reachMtd = 5;
    a.polyCalls = {"p"};
    a.callEdge = 7;
    b.failCasts = {"c1"};
    b.reachMtd = 5;
    b.callEdge = 9;
    auto c = compareMetrics({{"ci", a}, {"csc", b}});
    REQUIRE(c.relations.size() == 1);
    CHECK(c.relations[0] ==
          std::vector<Relation>{Relation::Less, Relation::Equal, Relation::Less, Relation::Greater});
    CHECK(c.dominatesBase == std::vector<bool>{false});
    const auto table = renderTable(c);
    CHECK(table.find("failCast") != std::string::npos);
    CHECK(table.find("1 <") != std::string::npos);
    CHECK(table.find("9 >") != std::string::npos);
    CHECK(table.find("dominates ci") != std::string::npos);
    CHECK(renderCsv(c) == "analysis,failCast,reachMtd,polyCall,callEdge,dominatesBase\nci,2,5,1,7,\ncsc,1,5,0,9,false\n");
}

TEST_CASE("dominance check names the extra facts") {
    AnalysisResult r, base;
    r.pt["x"] = {"o1", "o2"};
    base.pt["x"] = {"o1"};
    auto v = checkDominance(r, base);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "pt(x) has o2 beyond the baseline");
    CHECK(checkDominance(base, r).empty());
}

TEST_CASE("report JSON has sorted keys and the metrics block") {
    auto l = testing::loadFile("paper/fig1.ir");
    auto r = testing::runAnalysis(l, "csc").result;
    const auto text = reportJson(r, computeMetrics(*l.index, r));
    const auto j = nlohmann::json::parse(text);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"callEdges", "cutLog", "diagnostics", "hosts", "metrics", "pt",
                                           "reachable", "shortcuts"});
    CHECK(j["metrics"]["reachMtd"] == 3);
    CHECK(j["pt"]["Main.main/result1"] == nlohmann::json::array({"o16"}));
    CHECK(!j.contains("timedOut"));
    CHECK(nlohmann::json::parse(reportJson(r, computeMetrics(*l.index, r), true))["timedOut"] == true);
    CHECK(text == reportJson(testing::runAnalysis(l, "csc").result, computeMetrics(*l.index, r)));
}

}  // TEST_SUITE

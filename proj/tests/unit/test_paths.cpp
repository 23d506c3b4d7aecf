#include <doctest.h>

#include "support/oracles.hpp"

#include "hsieve/error.hpp"
#include "hsieve/paths.hpp"

using namespace hsieve;

namespace {

Fmp policy(std::vector<std::string> vars, std::vector<std::string> qs, std::vector<Edge> edges) {
    Fmp f;
    for (auto& v : vars) f.vars.push_back({v, 0});
    f.qstates = std::move(qs);
    f.q0 = f.qstates.front();
    f.edges = std::move(edges);
    return f;
}

DetNode root_of(const Fmp& f, std::uint64_t seed = 0) {
    const DefForest forest = build_def(policy_graph(f), seed);
    REQUIRE(forest.trees.size() == 1);
    return forest.trees[0];
}

} // namespace

TEST_CASE("two loops through the elimination point give two cycle paths") {
    const Fmp f = policy({"x"}, {"v", "a", "b"},
                         {Edge::simple("e1", "v", "a", {}), Edge::simple("e2", "a", "v", {}),
                          Edge::simple("e3", "v", "b", {}), Edge::simple("e4", "b", "v", {})});
    const DetNode node{{"a", "b", "v"}, "v", {}};
    const PathContext ctx = make_path_context(f);
    const auto paths = cycle_paths(node, ctx.quotient_of(node), ctx);
    REQUIRE(paths.size() == 2);
    std::set<std::vector<std::string>> ids{paths[0].edge_ids, paths[1].edge_ids};
    CHECK(ids == std::set<std::vector<std::string>>{{"e1", "e2"}, {"e3", "e4"}});
}

TEST_CASE("a single decrementing self-loop") {
    const Fmp f = policy({"x"}, {"v"}, {Edge::simple("e1", "v", "v", {{"x", -1}})});
    const DetNode node = root_of(f);
    const PathContext ctx = make_path_context(f);
    const auto paths = cycle_paths(node, ctx.quotient_of(node), ctx);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].net == EffectVector{{"x", -1}});
    CHECK(paths[0].vertices == std::vector<std::string>{"v", "v"});
}

TEST_CASE("root with two child components has three cycle paths and no through paths") {
    std::vector<Edge> es;
    const std::vector<std::pair<std::string, std::string>> ends{
        {"q2", "q3"}, {"q3", "q2"}, {"q2", "q4"}, {"q4", "q5"}, {"q5", "q6"}, {"q6", "q7"},
        {"q7", "q4"}, {"q7", "q2"}, {"q2", "q0"}, {"q0", "q1"}, {"q1", "q0"}, {"q1", "q2"}};
    for (std::size_t i = 0; i < ends.size(); ++i) es.push_back(Edge::simple("e" + std::to_string(i), ends[i].first, ends[i].second, {}));
    const Fmp f = policy({"x"}, {"q2", "q0", "q1", "q3", "q4", "q5", "q6", "q7"}, es);
    const DetNode root{{"q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7"}, "q2",
                       {DetNode{{"q0", "q1"}, "q0", {}}, DetNode{{"q4", "q5", "q6", "q7"}, "q4", {}}}};
    const PathContext ctx = make_path_context(f);
    const auto cycles = cycle_paths(root, ctx.quotient_of(root), ctx);
    std::set<std::vector<std::string>> shapes;
    for (const auto& p : cycles) shapes.insert(p.vertices);
    CHECK(shapes == std::set<std::vector<std::string>>{{"q2", "q3", "q2"},
                                                       {"q2", "c:q4_q5_q6_q7", "q2"},
                                                       {"q2", "c:q0_q1", "q2"}});
    CHECK(through_paths(root, ctx).empty());
    CHECK(node_paths(root, ctx.quotient_of(root), ctx).size() == 3);
}

TEST_CASE("through paths between boundary vertices") {
    // p feeds a; b leaks to x; inside h: a->b directly and a->m->b, plus b->a to close the SCC.
    const Fmp f = policy({"x"}, {"p", "a", "b", "m", "z"},
                         {Edge::simple("in", "p", "a", {}), Edge::simple("ab", "a", "b", {{"x", 1}}),
                          Edge::simple("am", "a", "m", {}), Edge::simple("mb", "m", "b", {{"x", -1}}),
                          Edge::simple("ba", "b", "a", {}), Edge::simple("out", "b", "z", {})});
    const DetNode node{{"a", "b", "m"}, "a", {}};
    const PathContext ctx = make_path_context(f);
    const auto paths = through_paths(node, ctx);
    REQUIRE(paths.size() == 2);
    std::set<std::vector<std::string>> ids{paths[0].edge_ids, paths[1].edge_ids};
    CHECK(ids == std::set<std::vector<std::string>>{{"ab"}, {"am", "mb"}});
    for (const auto& p : paths) CHECK(p.kind == PathKind::through);
}

TEST_CASE("a vertex that is both entry and exit has no zero-length through path") {
    const Fmp f = policy({"x"}, {"p", "a", "z"},
                         {Edge::simple("in", "p", "a", {}), Edge::simple("loop", "a", "a", {}),
                          Edge::simple("out", "a", "z", {})});
    const DetNode node{{"a"}, "a", {}};
    const PathContext ctx = make_path_context(f);
    CHECK(through_paths(node, ctx).empty());
    CHECK(node_paths(node, ctx.quotient_of(node), ctx).size() == 1);
}

TEST_CASE("degenerate nodes are rejected") {
    const Fmp f = policy({"x"}, {"v"}, {Edge::simple("e1", "v", "v", {})});
    const PathContext ctx = make_path_context(f);
    const DetNode empty{{}, "v", {}};
    try {
        (void)through_paths(empty, ctx);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "invalid-node");
    }
}

TEST_CASE("boxminus") {
    CHECK(boxminus({{"x", "y"}, {"z"}}, {"y"}) == VarFamily{{"x"}, {"z"}});
    CHECK(boxminus({{"x"}}, {"x"}) == VarFamily{{}});
    CHECK(boxminus({{}}, {"x", "y"}) == VarFamily{{}});
    CHECK(boxminus({}, {"x"}).empty());
}

TEST_CASE("IV and ZV on single cycles") {
    SUBCASE("increment only") {
        const Fmp f = policy({"x"}, {"v"}, {Edge::simple("e1", "v", "v", {{"x", 1}})});
        const DetNode node = root_of(f);
        const auto inc = build_inc_vars(node, make_path_context(f));
        CHECK(inc.iv == VarSet{"x"});
        CHECK(inc.zv.empty());
    }
    SUBCASE("increment then decrement") {
        const Fmp f = policy({"x"}, {"v", "w"},
                             {Edge::simple("e1", "v", "w", {{"x", 1}}), Edge::simple("e2", "w", "v", {{"x", -1}})});
        const DetNode node = root_of(f);
        const auto inc = build_inc_vars(node, make_path_context(f));
        CHECK(inc.iv.empty());
        CHECK(inc.zv == VarSet{"x"});
    }
    SUBCASE("untouched variables stay out of ZV") {
        const Fmp f = policy({"x", "y"}, {"v"}, {Edge::simple("e1", "v", "v", {{"y", -1}})});
        const auto inc = build_inc_vars(root_of(f), make_path_context(f));
        CHECK_FALSE(inc.zv.contains("x"));
        CHECK(inc.iv.empty());
    }
}

TEST_CASE("DV on the bundled fixtures") {
    SUBCASE("Example 1") {
        const Fmp f = oracles::load_fixture("example1.fmp.json");
        const DetNode node = root_of(f);
        const PathContext ctx = make_path_context(f);
        const auto inc = build_inc_vars(node, ctx);
        CHECK(inc.iv.empty());
        const auto dec = build_dec_vars(node, inc.iv, ctx);
        CHECK(dec.pdv == VarFamily{{"x"}});
        CHECK(dec.dv == VarFamily{{"x"}});
    }
    SUBCASE("F2") {
        const Fmp f = oracles::load_fixture("f2.fmp.json");
        const DetNode node = root_of(f);
        const PathContext ctx = make_path_context(f);
        const auto inc = build_inc_vars(node, ctx);
        CHECK(inc.iv == VarSet{"x"});
        const auto dec = build_dec_vars(node, inc.iv, ctx);
        CHECK(dec.pdv == VarFamily{{"x"}, {"y"}});
        CHECK(dec.dv == VarFamily{{}, {"y"}});
    }
    SUBCASE("zero-net cycle only") {
        const Fmp f = policy({"x"}, {"v", "w"},
                             {Edge::simple("e1", "v", "w", {{"x", 1}}), Edge::simple("e2", "w", "v", {{"x", -1}})});
        const DetNode node = root_of(f);
        const PathContext ctx = make_path_context(f);
        CHECK(build_dec_vars(node, {}, ctx).dv == VarFamily{{}});
    }
}

TEST_CASE("the path cap aborts enumeration") {
    std::vector<Edge> es;
    for (int i = 0; i < 6; ++i) es.push_back(Edge::simple("e" + std::to_string(i), "v", "v", {{"x", -1}}));
    const Fmp f = policy({"x"}, {"v"}, es);
    const DetNode node = root_of(f);
    CHECK_THROWS_AS((void)make_path_context(f, 5).facts(node), PathCapExceeded);
    CHECK(make_path_context(f, 6).facts(node).path_count == 6);
}

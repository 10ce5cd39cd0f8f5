// Copyright 2026 The SGR Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <regex>

#include "sgr/graph.hpp"
#include "sgr/template_codec.hpp"
#include "test_support.hpp"

namespace sgr {
namespace {

using testing::brute_force_has_cycle;
using testing::brute_force_reaches;
using testing::brute_force_sinks;

ReasoningGraph case_study() {
    auto parsed = parse(testing::slurp(testing::fixture_path("case_study.txt")));
    EXPECT_TRUE(parsed.ok());
    return parsed.value().graph;
}

ReasoningGraph diamond() {
    ReasoningGraph g;
    g.connect("A", "B");
    g.connect("A", "C");
    g.connect("B", "D");
    g.connect("C", "D");
    return g;
}

std::vector<std::string> keys(const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(id.key());
    return out;
}

std::size_t count_matches(const std::string& text, const std::regex& re) {
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                  std::sregex_iterator()));
}

const std::regex kNodeStmt(R"(\n  n\d+ \[label=)");
const std::regex kEdgeStmt(R"(\n  n\d+ -> n\d+;)");

TEST(NormalizeKey, LowercasesCollapsesAndStrips) {
    EXPECT_EQ(normalize_key("  Compare   Release\tYears. "), "compare release years");
    EXPECT_EQ(normalize_key("(Alice)"), "alice");
    EXPECT_EQ(normalize_key("...!?"), "");
    EXPECT_EQ(normalize_key("3 + 1"), "3 + 1");
}

TEST(NodeIdentity, EmptyKeyIsRejected) {
    EXPECT_THROW(NodeId::from_text("  ... "), std::invalid_argument);
    EXPECT_EQ(NodeId::from_text("Step One."), NodeId::from_text("step   one"));
}

TEST(NodeIdentity, EquallyNormalizedTextsShareOneNode) {
    ReasoningGraph g;
    const NodeId a = g.add_node("Compare years");
    const NodeId b = g.add_node("  compare   YEARS.");
    EXPECT_EQ(a, b);
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(g.node(a).text, "Compare years");
}

TEST(Validate, CaseStudyHasNoErrorsOrWarnings) {
    const auto g = case_study();
    EXPECT_EQ(g.node_count(), 9u);
    EXPECT_EQ(g.edge_count(), 8u);
    const auto d = validate(g);
    EXPECT_TRUE(d.errors.empty());
    EXPECT_TRUE(d.warnings.empty());
}

TEST(Validate, SingleNodeWarnsIsolated) {
    ReasoningGraph g;
    g.add_node("only");
    const auto d = validate(g);
    EXPECT_TRUE(d.errors.empty());
    ASSERT_EQ(d.warnings.size(), 1u);
    EXPECT_EQ(d.warnings[0].kind, DiagnosticKind::IsolatedNode);
}

TEST(Validate, TwoCycleIsAnError) {
    ReasoningGraph g;
    g.connect("A", "B");
    g.connect("B", "A");
    const auto d = validate(g);
    ASSERT_EQ(d.errors.size(), 1u);
    EXPECT_EQ(d.errors[0].kind, DiagnosticKind::Cycle);
    EXPECT_EQ(keys(d.errors[0].nodes), (std::vector<std::string>{"a", "b"}));
}

TEST(Validate, SelfLoopIsACycle) {
    ReasoningGraph g;
    g.connect("A", "A");
    EXPECT_TRUE(validate(g).has(DiagnosticKind::Cycle));
}

TEST(Validate, StructuralErrorsFromRawParts) {
    const NodeId a = NodeId::from_text("a"), b = NodeId::from_text("b"), ghost = NodeId::from_text("ghost");
    EXPECT_TRUE(validate(ReasoningGraph{}).has(DiagnosticKind::EmptyGraph));
    EXPECT_TRUE(validate(ReasoningGraph::from_parts({{a, "a"}, {b, "b"}}, {{a, ghost}})).has(DiagnosticKind::DanglingEdge));
    EXPECT_TRUE(validate(ReasoningGraph::from_parts({{a, "a"}, {b, "b"}}, {{a, b}, {a, b}})).has(DiagnosticKind::DuplicateEdge));
}

TEST(Graph, DuplicateEdgeInsertionIsRejected) {
    ReasoningGraph g;
    g.connect("A", "B");
    EXPECT_THROW(g.connect("a", "B."), GraphError);
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Parents, DiamondAndSourceAndCaseStudy) {
    const auto g = diamond();
    EXPECT_EQ(keys(parents(g, NodeId::from_text("D"))), (std::vector<std::string>{"b", "c"}));
    EXPECT_TRUE(parents(g, NodeId::from_text("A")).empty());
    EXPECT_THROW(parents(g, NodeId::from_text("Z")), UnknownNodeError);

    const auto cs = case_study();
    const auto decision = sinks(cs);
    ASSERT_EQ(decision.size(), 1u);
    EXPECT_EQ(cs.node(decision[0]).text, "Conclusion that each brother sees 4 sisters.");
    EXPECT_EQ(keys(parents(cs, decision[0])), (std::vector<std::string>{"question asks for the number of sisters per brother"}));
}

TEST(Sinks, SingleNodeAndDisconnectedChains) {
    ReasoningGraph one;
    one.add_node("x");
    EXPECT_EQ(keys(sinks(one)), (std::vector<std::string>{"x"}));

    ReasoningGraph chains;
    chains.connect("p1", "p2");
    chains.connect("q1", "q2");
    chains.connect("p2", "p3");
    EXPECT_EQ(keys(sinks(chains)), (std::vector<std::string>{"q2", "p3"}));
    const auto d = validate(chains);
    EXPECT_TRUE(d.has(DiagnosticKind::MultipleSinks));
    EXPECT_TRUE(d.has(DiagnosticKind::Disconnected));
}

TEST(Sinks, InvalidGraphIsRefused) {
    ReasoningGraph g;
    g.connect("A", "B");
    g.connect("B", "A");
    EXPECT_THROW(sinks(g), InvalidGraphError);
    EXPECT_THROW(topological_order(g), InvalidGraphError);
    EXPECT_THROW(export_dot(g), InvalidGraphError);
}

TEST(Ancestry, DiamondFromD) {
    const auto g = diamond();
    EXPECT_EQ(keys(ancestry(g, NodeId::from_text("D"))), (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(keys(ancestry(g, NodeId::from_text("B"))), (std::vector<std::string>{"a", "b"}));
}

TEST(Dot, CaseStudyHasNineNodesAndEightEdges) {
    const std::string dot = export_dot(case_study(), std::string("4"));
    EXPECT_EQ(dot.rfind("digraph reasoning {", 0), 0u);
    EXPECT_EQ(count_matches(dot, kNodeStmt), 9u);
    EXPECT_EQ(count_matches(dot, kEdgeStmt), 8u);
    EXPECT_NE(dot.find("class=\"decision\""), std::string::npos);
    EXPECT_NE(dot.find("xlabel=\"answer: 4\""), std::string::npos);
    EXPECT_EQ(dot.back(), '\n');
}

TEST(Dot, SingleNode) {
    ReasoningGraph g;
    g.add_node("alone");
    const std::string dot = export_dot(g);
    EXPECT_EQ(count_matches(dot, kNodeStmt), 1u);
    EXPECT_EQ(count_matches(dot, kEdgeStmt), 0u);
}

TEST(Dot, DiamondSourceIsABranch) {
    const std::string dot = export_dot(diamond());
    EXPECT_NE(dot.find("n0 [label=\"A\", class=\"branch\""), std::string::npos);
    EXPECT_EQ(dot.find("n1 [label=\"B\", class=\"branch\""), std::string::npos);
    EXPECT_NE(dot.find("n3 [label=\"D\", class=\"decision\""), std::string::npos);
}

TEST(Dot, EscapesQuotesAndBackslashes) {
    ReasoningGraph g;
    g.connect("say \"hi\"", "path C:\\x");
    const std::string dot = export_dot(g);
    EXPECT_NE(dot.find(R"(label="say \"hi\"")"), std::string::npos);
    EXPECT_NE(dot.find(R"(label="path C:\\x")"), std::string::npos);
}

// ---- properties over random graphs ----

TEST(GraphProperties, ValidateAgreesWithBruteForceCycleCheck) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 400; ++trial) {
        ReasoningGraph g = testing::random_dag(rng, 2 + rng() % 14);
        if (trial % 2) {  // plant random extra edges, some of them backwards
            for (int extra = 0; extra < 3; ++extra) {
                const auto& ns = g.nodes();
                const auto& p = ns[rng() % ns.size()], &c = ns[rng() % ns.size()];
                if (!g.has_edge(p.id, c.id)) g.add_edge(p.id, c.id);
            }
        }
        EXPECT_EQ(validate(g).has(DiagnosticKind::Cycle), brute_force_has_cycle(g)) << "trial " << trial;
    }
}

TEST(GraphProperties, TopologicalOrderVisitsEveryNodeOnceAndRespectsEdges) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const ReasoningGraph g = testing::random_dag(rng, 2 + rng() % 39);
        ASSERT_TRUE(validate(g).ok());
        const auto order = topological_order(g);
        ASSERT_EQ(order.size(), g.node_count());
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].key()] = i;
        EXPECT_EQ(pos.size(), g.node_count());
        for (const auto& e : g.edges()) EXPECT_LT(pos[e.parent.key()], pos[e.child.key()]);
    }
}

TEST(GraphProperties, ParentsAndChildrenAreAdjoint) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const ReasoningGraph g = testing::random_dag(rng, 2 + rng() % 20);
        for (const auto& q : g.nodes())
            for (const auto& p : g.nodes()) {
                const auto ps = parents(g, p.id), cs = children(g, q.id);
                const bool in_parents = std::find(ps.begin(), ps.end(), q.id) != ps.end();
                const bool in_children = std::find(cs.begin(), cs.end(), p.id) != cs.end();
                EXPECT_EQ(in_parents, g.has_edge(q.id, p.id));
                EXPECT_EQ(in_children, in_parents);
            }
    }
}

TEST(GraphProperties, SinksAndAncestryMatchBruteForce) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const ReasoningGraph g = testing::random_dag(rng, 2 + rng() % 24);
        EXPECT_EQ(keys(sinks(g)), brute_force_sinks(g));
        const NodeId target = g.nodes()[rng() % g.node_count()].id;
        std::vector<std::string> expected;
        for (const auto& n : g.nodes())
            if (brute_force_reaches(g, n.id, target)) expected.push_back(n.id.key());
        EXPECT_EQ(keys(ancestry(g, target)), expected);
    }
}

TEST(GraphProperties, NodeCountEqualsDistinctNormalizedKeys) {
    std::mt19937_64 rng(5);
    const std::vector<std::string> variants{"Alpha", "alpha.", "  ALPHA ", "Beta", "beta!", "Gamma  ray", "gamma ray"};
    for (int trial = 0; trial < 100; ++trial) {
        ReasoningGraph g;
        std::set<std::string> distinct;
        for (int i = 0; i < 10; ++i) {
            const auto& t = variants[rng() % variants.size()];
            g.add_node(t);
            distinct.insert(normalize_key(t));
        }
        EXPECT_EQ(g.node_count(), distinct.size());
    }
}

TEST(GraphProperties, DotIsDeterministicAndDistinguishesGraphs) {
    std::mt19937_64 rng(6);
    std::vector<ReasoningGraph> graphs;
    for (int i = 0; i < 60; ++i) graphs.push_back(testing::random_dag(rng, 2 + rng() % 6, 0.4));
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        EXPECT_EQ(export_dot(graphs[i]), export_dot(graphs[i]));
        for (std::size_t j = i + 1; j < graphs.size(); ++j)
            if (!(graphs[i] == graphs[j])) {
                EXPECT_NE(export_dot(graphs[i]), export_dot(graphs[j]));
            }
    }
}

}  // namespace
}  // namespace sgr

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

#include "sgr/graph_merge.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "sgr/answer_match.hpp"

namespace sgr {

namespace {

using EdgeKey = std::pair<std::string, std::string>;

EdgeKey key_of(const ReasoningEdge& e) { return {e.parent.key(), e.child.key()}; }

std::vector<const Candidate*> usable_candidates(const CandidateSet& set) {
    std::vector<const Candidate*> out;
    for (const auto& c : set.candidates)
        if (c.output.graph.edge_count() > 0 && !c.output.answer.empty() && validate(c.output.graph).ok())
            out.push_back(&c);
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate* a, const Candidate* b) { return a->source_index < b->source_index; });
    return out;
}

// Restricts `graph` to the ancestry of `conclusion`, recording what is removed.
ReasoningGraph prune_to(const ReasoningGraph& graph, const NodeId& conclusion,
                        const std::map<EdgeKey, std::size_t>& multiplicity, MergedResult& result) {
    const auto keep_list = ancestry(graph, conclusion);
    const std::set<NodeId> keep(keep_list.begin(), keep_list.end());
    std::vector<ReasoningNode> nodes;
    for (const auto& n : graph.nodes()) {
        if (keep.contains(n.id))
            nodes.push_back(n);
        else
            result.pruned_nodes.push_back(n.id);
    }
    std::vector<ReasoningEdge> edges;
    for (const auto& e : graph.edges()) {
        if (keep.contains(e.parent) && keep.contains(e.child)) {
            edges.push_back(e);
        } else {
            auto it = multiplicity.find(key_of(e));
            result.dropped_edges.push_back({e, it == multiplicity.end() ? 1 : it->second, "pruned"});
        }
    }
    return ReasoningGraph::from_parts(std::move(nodes), std::move(edges));
}

}  // namespace

std::string_view to_string(MergeMode mode) {
    switch (mode) {
        case MergeMode::Deterministic: return "deterministic";
        case MergeMode::Llm: return "llm";
        case MergeMode::LlmWithFallback: return "llm-with-fallback";
    }
    return "unknown";
}

std::optional<MergeMode> parse_merge_mode(std::string_view name) {
    if (name == "deterministic") return MergeMode::Deterministic;
    if (name == "llm") return MergeMode::Llm;
    if (name == "llm-with-fallback") return MergeMode::LlmWithFallback;
    return std::nullopt;
}

bool operator==(const MergedResult& a, const MergedResult& b) {
    auto same_drops = [](const std::vector<DroppedEdge>& x, const std::vector<DroppedEdge>& y) {
        return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const DroppedEdge& p, const DroppedEdge& q) {
            return p.edge == q.edge && p.multiplicity == q.multiplicity && p.reason == q.reason;
        });
    };
    return a.graph == b.graph && a.answer == b.answer && a.conclusion == b.conclusion &&
           a.contributing_indices == b.contributing_indices && same_drops(a.dropped_edges, b.dropped_edges) &&
           a.pruned_nodes == b.pruned_nodes;
}

NodeId conclusion_of(const ReasoningGraph& graph) {
    const auto all = sinks(graph);
    if (all.empty()) throw InvalidGraphError("graph has no sink");
    if (!graph.edges().empty()) {
        const NodeId& last_child = graph.edges().back().child;
        if (std::find(all.begin(), all.end(), last_child) != all.end()) return last_child;
    }
    return all.back();
}

MergedResult merge_deterministic(const CandidateSet& set) {
    const auto usable = usable_candidates(set);
    if (usable.empty()) throw MergeError("no valid candidate to merge");

    // Groups in order of their lowest member index, so the first largest group wins ties.
    std::vector<std::pair<std::string, std::vector<const Candidate*>>> groups;
    for (const Candidate* c : usable) {
        const std::string key = canonical_answer_key(c->output.answer);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
        if (it == groups.end())
            groups.push_back({key, {c}});
        else
            it->second.push_back(c);
    }
    const auto* best = &groups.front();
    for (const auto& g : groups)
        if (g.second.size() > best->second.size()) best = &g;
    const auto& members = best->second;

    MergedResult result;
    result.mode = MergeMode::Deterministic;
    result.answer = members.front()->output.answer;
    for (const Candidate* c : members) result.contributing_indices.insert(c->source_index);

    std::map<EdgeKey, std::size_t> multiplicity;
    std::vector<ReasoningNode> nodes;
    std::unordered_set<std::string> seen_nodes;
    std::vector<ReasoningEdge> edges;
    for (const Candidate* c : members) {
        for (const auto& n : c->output.graph.nodes())
            if (seen_nodes.insert(n.id.key()).second) nodes.push_back(n);
        for (const auto& e : c->output.graph.edges())
            if (multiplicity[key_of(e)]++ == 0) edges.push_back(e);
    }
    ReasoningGraph merged = ReasoningGraph::from_parts(nodes, edges);

    while (true) {
        const auto diag = validate(merged);
        std::vector<const ReasoningEdge*> on_cycle;
        for (const auto& err : diag.errors) {
            if (err.kind != DiagnosticKind::Cycle) continue;
            const std::set<NodeId> comp(err.nodes.begin(), err.nodes.end());
            for (const auto& e : merged.edges())
                if (comp.contains(e.parent) && comp.contains(e.child)) on_cycle.push_back(&e);
        }
        if (on_cycle.empty()) break;
        const ReasoningEdge* victim = *std::min_element(
            on_cycle.begin(), on_cycle.end(), [&](const ReasoningEdge* a, const ReasoningEdge* b) {
                const std::size_t ma = multiplicity[key_of(*a)], mb = multiplicity[key_of(*b)];
                if (ma != mb) return ma < mb;
                return key_of(*a) > key_of(*b);
            });
        result.dropped_edges.push_back({*victim, multiplicity[key_of(*victim)], "cycle"});
        const ReasoningEdge removed = *victim;
        std::erase(edges, removed);
        merged = ReasoningGraph::from_parts(nodes, edges);
    }

    result.conclusion = conclusion_of(members.front()->output.graph);
    result.graph = prune_to(merged, result.conclusion, multiplicity, result);
    return result;
}

MergedResult merge_llm(const CandidateSet& set, ModelClient& client, const LlmMergeOptions& options) {
    const auto usable = usable_candidates(set);
    if (usable.empty()) throw MergeError("no valid candidate to merge");

    std::vector<std::string> rendered;
    for (const Candidate* c : usable) rendered.push_back(render(c->output));
    const PromptTemplate prompt = prompts::integration(set.question, rendered);

    CompletionRequest request{prompt.system, prompt.user, options.sampling, std::nullopt};
    ParseResult parsed = parse(client.complete(request).text, Strictness::Strict);
    std::string problem;
    if (!parsed.ok()) {
        problem = parsed.error().message();
        request.user_prompt += prompts::repair_instruction(problem);
        parsed = parse(client.complete(request).text, Strictness::Strict);
    }
    if (!parsed.ok()) {
        const std::string detail = "integration reply unusable after repair: " + parsed.error().message();
        if (!options.allow_fallback) throw MergeError(detail);
        MergedResult fallback = merge_deterministic(set);
        fallback.fallback = true;
        fallback.note = detail;
        return fallback;
    }

    MergedResult result;
    result.mode = MergeMode::Llm;
    if (!problem.empty()) result.note = "repaired after: " + problem;
    const StructuredOutput& out = parsed.value();
    result.answer = out.answer;
    const std::string answer_key = canonical_answer_key(out.answer);
    for (const Candidate* c : usable)
        if (canonical_answer_key(c->output.answer) == answer_key) result.contributing_indices.insert(c->source_index);
    if (result.contributing_indices.empty())
        for (const Candidate* c : usable) result.contributing_indices.insert(c->source_index);

    std::map<EdgeKey, std::size_t> multiplicity;
    for (const auto& e : out.graph.edges()) multiplicity[key_of(e)] = 1;
    result.conclusion = conclusion_of(out.graph);
    result.graph = prune_to(out.graph, result.conclusion, multiplicity, result);
    return result;
}

}  // namespace sgr

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

#include "sgr/graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>

namespace sgr {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_strippable(unsigned char c) { return std::isspace(c) != 0 || std::ispunct(c) != 0; }

// Adjacency over edges whose endpoints both exist; indices into graph.nodes().
struct Adjacency {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> in;
};

Adjacency build_adjacency(const ReasoningGraph& graph) {
    Adjacency adj;
    adj.out.resize(graph.node_count());
    adj.in.resize(graph.node_count());
    for (const auto& e : graph.edges()) {
        auto p = graph.index_of(e.parent);
        auto c = graph.index_of(e.child);
        if (!p || !c) continue;
        adj.out[*p].push_back(*c);
        adj.in[*c].push_back(*p);
    }
    return adj;
}

// Tarjan's algorithm, iterative. Returns strongly connected components that
// contain a cycle (size > 1, or a self-loop).
std::vector<std::vector<std::size_t>> cyclic_components(const Adjacency& adj) {
    const std::size_t n = adj.out.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> result;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.next < adj.out[f.v].size()) {
                std::size_t w = adj.out[f.v][f.next++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] != index[v]) continue;
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            bool self_loop = comp.size() == 1 &&
                             std::find(adj.out[v].begin(), adj.out[v].end(), v) != adj.out[v].end();
            if (comp.size() > 1 || self_loop) {
                std::sort(comp.begin(), comp.end());
                result.push_back(std::move(comp));
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::size_t weak_component_count(const Adjacency& adj) {
    const std::size_t n = adj.out.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v : adj.out[u]) parent[find(u)] = find(v);
    std::size_t count = 0;
    for (std::size_t u = 0; u < n; ++u) count += find(u) == u;
    return count;
}

}  // namespace

std::string normalize_key(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && is_strippable(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_strippable(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    bool pending_space = false;
    for (std::size_t i = b; i < e; ++i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
    return out;
}

NodeId NodeId::from_text(std::string_view text) {
    std::string key = normalize_key(text);
    if (key.empty()) throw std::invalid_argument("node text is empty after normalization");
    return NodeId(std::move(key));
}

ReasoningGraph ReasoningGraph::from_parts(std::vector<ReasoningNode> nodes,
                                          std::vector<ReasoningEdge> edges) {
    ReasoningGraph g;
    for (auto& n : nodes) {
        if (g.index_.contains(n.id.key())) continue;
        g.index_.emplace(n.id.key(), g.nodes_.size());
        g.nodes_.push_back(std::move(n));
    }
    g.edges_ = std::move(edges);
    return g;
}

NodeId ReasoningGraph::add_node(std::string_view text) {
    NodeId id = NodeId::from_text(text);
    if (!index_.contains(id.key())) {
        index_.emplace(id.key(), nodes_.size());
        nodes_.push_back({id, std::string(text)});
    }
    return id;
}

void ReasoningGraph::add_edge(const NodeId& parent, const NodeId& child) {
    if (has_edge(parent, child))
        throw GraphError("duplicate edge: " + parent.key() + " -> " + child.key());
    edges_.push_back({parent, child});
}

void ReasoningGraph::connect(std::string_view parent_text, std::string_view child_text) {
    NodeId p = add_node(parent_text);
    NodeId c = add_node(child_text);
    add_edge(p, c);
}

bool ReasoningGraph::has_edge(const NodeId& parent, const NodeId& child) const {
    return std::any_of(edges_.begin(), edges_.end(),
                       [&](const ReasoningEdge& e) { return e.parent == parent && e.child == child; });
}

std::optional<std::size_t> ReasoningGraph::index_of(const NodeId& id) const {
    auto it = index_.find(id.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const ReasoningNode& ReasoningGraph::node(const NodeId& id) const {
    auto idx = index_of(id);
    if (!idx) throw UnknownNodeError("unknown node: " + id.key());
    return nodes_[*idx];
}

bool operator==(const ReasoningGraph& a, const ReasoningGraph& b) {
    if (a.node_count() != b.node_count() || a.edges_ != b.edges_) return false;
    return std::all_of(a.nodes_.begin(), a.nodes_.end(),
                       [&](const ReasoningNode& n) { return b.contains(n.id); });
}

std::string_view to_string(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::Cycle: return "cycle";
        case DiagnosticKind::DanglingEdge: return "dangling-edge";
        case DiagnosticKind::EmptyGraph: return "empty-graph";
        case DiagnosticKind::DuplicateEdge: return "duplicate-edge";
        case DiagnosticKind::MultipleSinks: return "multiple-sinks";
        case DiagnosticKind::Disconnected: return "disconnected";
        case DiagnosticKind::IsolatedNode: return "isolated-node";
    }
    return "unknown";
}

bool GraphDiagnostics::has(DiagnosticKind kind) const {
    auto match = [kind](const Diagnostic& d) { return d.kind == kind; };
    return std::any_of(errors.begin(), errors.end(), match) ||
           std::any_of(warnings.begin(), warnings.end(), match);
}

GraphDiagnostics validate(const ReasoningGraph& graph) {
    GraphDiagnostics diag;
    const auto& nodes = graph.nodes();

    if (nodes.empty()) diag.errors.push_back({DiagnosticKind::EmptyGraph, {}, "graph has no nodes"});

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : graph.edges()) {
        std::vector<NodeId> missing;
        if (!graph.contains(e.parent)) missing.push_back(e.parent);
        if (!graph.contains(e.child) && e.child != e.parent) missing.push_back(e.child);
        if (!missing.empty()) {
            diag.errors.push_back({DiagnosticKind::DanglingEdge, missing,
                                   "edge " + e.parent.key() + " -> " + e.child.key() +
                                       " references a missing node"});
        }
        if (!seen.emplace(e.parent.key(), e.child.key()).second) {
            diag.errors.push_back({DiagnosticKind::DuplicateEdge, {e.parent, e.child},
                                   "edge " + e.parent.key() + " -> " + e.child.key() + " repeated"});
        }
    }

    const Adjacency adj = build_adjacency(graph);
    for (const auto& comp : cyclic_components(adj)) {
        Diagnostic d{DiagnosticKind::Cycle, {}, "cycle through "};
        for (std::size_t k = 0; k < comp.size(); ++k) {
            d.nodes.push_back(nodes[comp[k]].id);
            d.detail += (k ? ", " : "") + nodes[comp[k]].id.key();
        }
        diag.errors.push_back(std::move(d));
    }

    if (nodes.empty()) return diag;

    std::vector<NodeId> sink_ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (adj.out[i].empty() && adj.in[i].empty())
            diag.warnings.push_back({DiagnosticKind::IsolatedNode, {nodes[i].id},
                                     "node has no edges: " + nodes[i].id.key()});
        if (adj.out[i].empty()) sink_ids.push_back(nodes[i].id);
    }
    if (sink_ids.size() > 1)
        diag.warnings.push_back({DiagnosticKind::MultipleSinks, sink_ids,
                                 std::to_string(sink_ids.size()) + " sink nodes"});
    if (std::size_t parts = weak_component_count(adj); parts > 1)
        diag.warnings.push_back({DiagnosticKind::Disconnected, {},
                                 std::to_string(parts) + " weakly connected components"});
    return diag;
}

void require_valid(const ReasoningGraph& graph) {
    auto diag = validate(graph);
    if (!diag.ok()) {
        const auto& e = diag.errors.front();
        throw InvalidGraphError("invalid graph: " + std::string(to_string(e.kind)) + ": " + e.detail);
    }
}

std::vector<NodeId> parents(const ReasoningGraph& graph, const NodeId& node) {
    if (!graph.contains(node)) throw UnknownNodeError("unknown node: " + node.key());
    std::vector<NodeId> out;
    for (const auto& e : graph.edges())
        if (e.child == node && std::find(out.begin(), out.end(), e.parent) == out.end())
            out.push_back(e.parent);
    return out;
}

std::vector<NodeId> children(const ReasoningGraph& graph, const NodeId& node) {
    if (!graph.contains(node)) throw UnknownNodeError("unknown node: " + node.key());
    std::vector<NodeId> out;
    for (const auto& e : graph.edges())
        if (e.parent == node && std::find(out.begin(), out.end(), e.child) == out.end())
            out.push_back(e.child);
    return out;
}

std::vector<NodeId> sinks(const ReasoningGraph& graph) {
    require_valid(graph);
    std::vector<bool> has_out(graph.node_count(), false);
    for (const auto& e : graph.edges()) has_out[*graph.index_of(e.parent)] = true;
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        if (!has_out[i]) out.push_back(graph.nodes()[i].id);
    return out;
}

std::vector<NodeId> topological_order(const ReasoningGraph& graph) {
    require_valid(graph);
    const Adjacency adj = build_adjacency(graph);
    std::vector<std::size_t> indeg(graph.node_count());
    for (std::size_t i = 0; i < indeg.size(); ++i) indeg[i] = adj.in[i].size();
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < indeg.size(); ++i)
        if (indeg[i] == 0) ready.insert(i);
    std::vector<NodeId> order;
    while (!ready.empty()) {
        std::size_t v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(graph.nodes()[v].id);
        for (std::size_t w : adj.out[v])
            if (--indeg[w] == 0) ready.insert(w);
    }
    return order;
}

std::vector<NodeId> ancestry(const ReasoningGraph& graph, const NodeId& target) {
    auto start = graph.index_of(target);
    if (!start) throw UnknownNodeError("unknown node: " + target.key());
    const Adjacency adj = build_adjacency(graph);
    std::vector<bool> seen(graph.node_count(), false);
    std::vector<std::size_t> todo{*start};
    seen[*start] = true;
    while (!todo.empty()) {
        std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t p : adj.in[v])
            if (!seen[p]) {
                seen[p] = true;
                todo.push_back(p);
            }
    }
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) out.push_back(graph.nodes()[i].id);
    return out;
}

}  // namespace sgr

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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sgr {

/// Canonical node key: ASCII-lowercased, internal whitespace runs collapsed to
/// one space, leading/trailing whitespace and punctuation stripped.
std::string normalize_key(std::string_view text);

/// Identity of a reasoning node. Two nodes with equal keys are the same node.
class NodeId {
public:
    NodeId() = default;

    /// Normalizes `text`; throws std::invalid_argument if the key is empty.
    static NodeId from_text(std::string_view text);

    const std::string& key() const noexcept { return key_; }
    bool empty() const noexcept { return key_.empty(); }

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;

private:
    explicit NodeId(std::string key) : key_(std::move(key)) {}
    std::string key_;
};

struct ReasoningNode {
    NodeId id;
    std::string text;  // original display text
};

struct ReasoningEdge {
    NodeId parent;
    NodeId child;

    friend bool operator==(const ReasoningEdge&, const ReasoningEdge&) = default;
    friend auto operator<=>(const ReasoningEdge&, const ReasoningEdge&) = default;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by operations whose precondition is a graph with no validation errors.
class InvalidGraphError : public GraphError {
public:
    using GraphError::GraphError;
};

class UnknownNodeError : public GraphError {
public:
    using GraphError::GraphError;
};

/// Directed graph of reasoning steps. Nodes are deduplicated by NodeId and kept
/// in first-insertion order; edges keep insertion order and duplicates are
/// rejected. Structural problems (cycles, dangling edges) are representable so
/// that validate() can report them.
class ReasoningGraph {
public:
    ReasoningGraph() = default;

    /// Builds a graph from raw parts without rejecting anything; used for
    /// deserialization and diagnostics tests. Duplicate node ids keep the first.
    static ReasoningGraph from_parts(std::vector<ReasoningNode> nodes,
                                     std::vector<ReasoningEdge> edges);

    /// Returns the id of the existing node with the same key, or inserts one.
    NodeId add_node(std::string_view text);

    /// Throws GraphError on a duplicate edge. Endpoints are not checked here.
    void add_edge(const NodeId& parent, const NodeId& child);

    /// add_node for both texts, then add_edge.
    void connect(std::string_view parent_text, std::string_view child_text);

    const std::vector<ReasoningNode>& nodes() const noexcept { return nodes_; }
    const std::vector<ReasoningEdge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool contains(const NodeId& id) const { return index_.contains(id.key()); }
    bool has_edge(const NodeId& parent, const NodeId& child) const;

    /// Index into nodes(), or nullopt.
    std::optional<std::size_t> index_of(const NodeId& id) const;
    const ReasoningNode& node(const NodeId& id) const;

    /// Same node key set and same edge sequence. Display text is not compared.
    friend bool operator==(const ReasoningGraph& a, const ReasoningGraph& b);

private:
    std::vector<ReasoningNode> nodes_;
    std::vector<ReasoningEdge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class DiagnosticKind {
    // errors
    Cycle,
    DanglingEdge,
    EmptyGraph,
    DuplicateEdge,
    // warnings
    MultipleSinks,
    Disconnected,
    IsolatedNode,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
    DiagnosticKind kind;
    std::vector<NodeId> nodes;  // involved nodes, graph insertion order
    std::string detail;
};

struct GraphDiagnostics {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    bool ok() const noexcept { return errors.empty(); }
    bool has(DiagnosticKind kind) const;
};

/// Never throws; every violation is reported as data.
GraphDiagnostics validate(const ReasoningGraph& graph);

/// Throws InvalidGraphError listing the first error when validation fails.
void require_valid(const ReasoningGraph& graph);

std::vector<NodeId> parents(const ReasoningGraph& graph, const NodeId& node);
std::vector<NodeId> children(const ReasoningGraph& graph, const NodeId& node);

/// Out-degree-zero nodes in insertion order. Requires a valid graph.
std::vector<NodeId> sinks(const ReasoningGraph& graph);

/// Kahn order with ties broken by insertion order. Requires a valid graph.
std::vector<NodeId> topological_order(const ReasoningGraph& graph);

/// Nodes from which `target` is reachable, including `target`, in insertion order.
std::vector<NodeId> ancestry(const ReasoningGraph& graph, const NodeId& target);

/// Graphviz digraph. Branch nodes (out-degree >= 2) and the decision node (the
/// sole sink, if exactly one exists) get distinct styling; `answer` is attached
/// to the decision node as an external label. Requires a valid graph.
std::string export_dot(const ReasoningGraph& graph,
                       const std::optional<std::string>& answer = std::nullopt);

}  // namespace sgr

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
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgr/graph.hpp"
#include "sgr/model_client.hpp"
#include "sgr/template_codec.hpp"

namespace sgr {

struct Candidate {
    StructuredOutput output;
    std::size_t source_index = 0;
};

/// The k parsed candidates for one question, ascending by source_index.
struct CandidateSet {
    std::string question;
    std::vector<Candidate> candidates;
};

enum class MergeMode { Deterministic, Llm, LlmWithFallback };

std::string_view to_string(MergeMode mode);
std::optional<MergeMode> parse_merge_mode(std::string_view name);

struct DroppedEdge {
    ReasoningEdge edge;
    std::size_t multiplicity = 0;
    std::string reason;  // "cycle" or "pruned"
};

struct MergedResult {
    ReasoningGraph graph;
    std::string answer;
    NodeId conclusion;
    std::set<std::size_t> contributing_indices;
    std::vector<DroppedEdge> dropped_edges;
    std::vector<NodeId> pruned_nodes;
    MergeMode mode = MergeMode::Deterministic;
    bool fallback = false;  // LLM merge failed and the deterministic merge was used
    std::string note;

    /// Graph, answer, conclusion and bookkeeping; mode/fallback/note excluded.
    friend bool operator==(const MergedResult& a, const MergedResult& b);
};

class MergeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reproducible integration of a candidate set:
///   1. group candidates by canonical answer; keep the largest group (ties go
///      to the group holding the lowest source index); its lowest-index
///      member's answer text is the merged answer;
///   2. union the group's nodes by id and edges by (parent, child), counting
///      how many candidates carry each edge;
///   3. while the union is cyclic, delete the cycle edge with the lowest
///      multiplicity (ties: lexicographically greatest key);
///   4. the conclusion is the final sink of the lowest-index member;
///   5. prune every node that cannot reach the conclusion.
/// Candidates whose graphs fail validation are ignored. Throws MergeError
/// when none remain.
MergedResult merge_deterministic(const CandidateSet& set);

struct LlmMergeOptions {
    SamplingConfig sampling = [] { SamplingConfig s; s.temperature = 0.0; return s; }();
    bool allow_fallback = true;
};

/// Integration through the teacher model: one request carrying every rendered
/// candidate, strict-parsed; one repair retry on a bad reply; then either the
/// deterministic merge (fallback = true) or MergeError when fallback is off.
/// Transport errors propagate.
MergedResult merge_llm(const CandidateSet& set, ModelClient& client, const LlmMergeOptions& options = {});

/// The sink a candidate graph concludes on: the child of the last step when
/// that is a sink, else the last sink in insertion order.
NodeId conclusion_of(const ReasoningGraph& graph);

}  // namespace sgr

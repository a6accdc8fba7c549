// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace hazpipe {

struct MinCutResult;

/// Weighted s/t graph over nodes 0..node_count-1 with implicit source and
/// sink terminals. Capacities must be non-negative.
class StGraph {
public:
    explicit StGraph(int node_count);

    int node_count() const { return node_count_; }

    /// Adds source->node and node->sink capacity (accumulates).
    void add_terminal_capacity(int node, double cap_from_source, double cap_to_sink);

    /// Adds a node pair with capacities in both directions (accumulates a new arc pair).
    void add_edge(int a, int b, double cap_ab, double cap_ba);

private:
    struct Arc {
        std::int32_t head;
        double residual;
        double capacity;
    };

    int node_count_;                               // excludes terminals
    std::vector<Arc> arcs_;                        // arc i pairs with i^1
    std::vector<std::vector<std::int32_t>> out_;   // per node incl. source/sink
    int source() const { return node_count_; }
    int sink() const { return node_count_ + 1; }
    void add_arc_pair(int a, int b, double cap_ab, double cap_ba);

    friend MinCutResult min_cut(StGraph graph);
};

struct MinCutResult {
    double cut_cost = 0.0;   // sum of original capacities crossing the cut
    double max_flow = 0.0;   // accumulated augmenting flow (equals cut_cost up to rounding)
    std::vector<std::uint8_t> source_side;

    bool in_source_side(int node) const { return source_side[static_cast<std::size_t>(node)] != 0; }
};

/// Minimum s-t cut via max-flow (Dinic). The partition places every node
/// reachable from the source in the final residual graph on the source side.
MinCutResult min_cut(StGraph graph);

}  // namespace hazpipe

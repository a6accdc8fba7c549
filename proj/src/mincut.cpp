// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/mincut.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hazpipe {

StGraph::StGraph(int node_count) : node_count_(node_count) {
    if (node_count < 0) throw std::invalid_argument("node count must be >= 0");
    out_.resize(static_cast<std::size_t>(node_count) + 2);
}

void StGraph::add_arc_pair(int a, int b, double cap_ab, double cap_ba) {
    const auto id = static_cast<std::int32_t>(arcs_.size());
    arcs_.push_back(Arc{static_cast<std::int32_t>(b), cap_ab, cap_ab});
    arcs_.push_back(Arc{static_cast<std::int32_t>(a), cap_ba, cap_ba});
    out_[static_cast<std::size_t>(a)].push_back(id);
    out_[static_cast<std::size_t>(b)].push_back(id + 1);
}

void StGraph::add_terminal_capacity(int node, double cap_from_source, double cap_to_sink) {
    if (node < 0 || node >= node_count_) throw std::invalid_argument("node out of range");
    if (cap_from_source < 0.0 || cap_to_sink < 0.0) {
        throw std::invalid_argument("capacities must be non-negative");
    }
    if (cap_from_source > 0.0) add_arc_pair(source(), node, cap_from_source, 0.0);
    if (cap_to_sink > 0.0) add_arc_pair(node, sink(), cap_to_sink, 0.0);
}

void StGraph::add_edge(int a, int b, double cap_ab, double cap_ba) {
    if (a < 0 || a >= node_count_ || b < 0 || b >= node_count_ || a == b) {
        throw std::invalid_argument("edge endpoints out of range");
    }
    if (cap_ab < 0.0 || cap_ba < 0.0) throw std::invalid_argument("capacities must be non-negative");
    if (cap_ab > 0.0 || cap_ba > 0.0) add_arc_pair(a, b, cap_ab, cap_ba);
}

MinCutResult min_cut(StGraph g) {
    const int n_total = g.node_count_ + 2;
    const int s = g.source();
    const int t = g.sink();

    std::vector<int> level(static_cast<std::size_t>(n_total));
    std::vector<std::uint32_t> it(static_cast<std::size_t>(n_total));
    std::vector<int> bfs_queue;
    bfs_queue.reserve(static_cast<std::size_t>(n_total));

    auto bfs = [&]() {
        std::fill(level.begin(), level.end(), -1);
        bfs_queue.clear();
        bfs_queue.push_back(s);
        level[static_cast<std::size_t>(s)] = 0;
        for (std::size_t qi = 0; qi < bfs_queue.size(); ++qi) {
            const int u = bfs_queue[qi];
            for (std::int32_t aid : g.out_[static_cast<std::size_t>(u)]) {
                const auto& arc = g.arcs_[static_cast<std::size_t>(aid)];
                if (arc.residual > 0.0 && level[static_cast<std::size_t>(arc.head)] < 0) {
                    level[static_cast<std::size_t>(arc.head)] = level[static_cast<std::size_t>(u)] + 1;
                    bfs_queue.push_back(arc.head);
                }
            }
        }
        return level[static_cast<std::size_t>(t)] >= 0;
    };

    // iterative blocking-flow DFS with current-arc pointers
    std::vector<int> path_node;
    std::vector<std::int32_t> path_arc;
    double total_flow = 0.0;

    auto dfs_augment = [&]() {
        path_node.clear();
        path_arc.clear();
        path_node.push_back(s);
        while (!path_node.empty()) {
            const int u = path_node.back();
            if (u == t) {
                double bottleneck = std::numeric_limits<double>::infinity();
                for (std::int32_t aid : path_arc) {
                    bottleneck = std::min(bottleneck, g.arcs_[static_cast<std::size_t>(aid)].residual);
                }
                for (std::int32_t aid : path_arc) {
                    g.arcs_[static_cast<std::size_t>(aid)].residual -= bottleneck;
                    g.arcs_[static_cast<std::size_t>(aid ^ 1)].residual += bottleneck;
                }
                total_flow += bottleneck;
                // retreat to the first saturated arc on the path
                std::size_t cut_at = 0;
                while (cut_at < path_arc.size() &&
                       g.arcs_[static_cast<std::size_t>(path_arc[cut_at])].residual > 0.0) {
                    ++cut_at;
                }
                path_node.resize(cut_at + 1);
                path_arc.resize(cut_at);
                continue;
            }
            bool advanced = false;
            auto& cursor = it[static_cast<std::size_t>(u)];
            const auto& arcs_of_u = g.out_[static_cast<std::size_t>(u)];
            while (cursor < arcs_of_u.size()) {
                const std::int32_t aid = arcs_of_u[cursor];
                const auto& arc = g.arcs_[static_cast<std::size_t>(aid)];
                if (arc.residual > 0.0 &&
                    level[static_cast<std::size_t>(arc.head)] ==
                        level[static_cast<std::size_t>(u)] + 1) {
                    path_node.push_back(arc.head);
                    path_arc.push_back(aid);
                    advanced = true;
                    break;
                }
                ++cursor;
            }
            if (!advanced) {
                level[static_cast<std::size_t>(u)] = -1;  // dead end for this phase
                path_node.pop_back();
                if (!path_arc.empty()) path_arc.pop_back();
            }
        }
    };

    while (bfs()) {
        std::fill(it.begin(), it.end(), 0u);
        dfs_augment();
    }

    MinCutResult result;
    result.max_flow = total_flow;
    result.source_side.assign(static_cast<std::size_t>(g.node_count_), 0);

    // source side = nodes reachable from s in the residual graph
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(n_total), 0);
    bfs_queue.clear();
    bfs_queue.push_back(s);
    reach[static_cast<std::size_t>(s)] = 1;
    for (std::size_t qi = 0; qi < bfs_queue.size(); ++qi) {
        const int u = bfs_queue[qi];
        for (std::int32_t aid : g.out_[static_cast<std::size_t>(u)]) {
            const auto& arc = g.arcs_[static_cast<std::size_t>(aid)];
            if (arc.residual > 0.0 && !reach[static_cast<std::size_t>(arc.head)]) {
                reach[static_cast<std::size_t>(arc.head)] = 1;
                bfs_queue.push_back(arc.head);
            }
        }
    }
    for (int v = 0; v < g.node_count_; ++v) {
        result.source_side[static_cast<std::size_t>(v)] = reach[static_cast<std::size_t>(v)];
    }

    // exact cut cost: original capacities of forward arcs leaving the source set
    double cost = 0.0;
    for (int u = 0; u < n_total; ++u) {
        if (!reach[static_cast<std::size_t>(u)]) continue;
        for (std::int32_t aid : g.out_[static_cast<std::size_t>(u)]) {
            const auto& arc = g.arcs_[static_cast<std::size_t>(aid)];
            if (!reach[static_cast<std::size_t>(arc.head)]) cost += arc.capacity;
        }
    }
    result.cut_cost = cost;
    return result;
}

}  // namespace hazpipe

// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/anms.hpp"

#include <algorithm>
#include <numeric>

namespace hazpipe {

namespace {

// Global emission order: score desc, then class_id asc, then input index asc.
bool higher_priority(const Detection& a, std::size_t ia, const Detection& b, std::size_t ib) {
    if (a.score != b.score) return a.score > b.score;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return ia < ib;
}

std::vector<Detection> materialize(std::span<const Detection> detections,
                                   const std::vector<std::size_t>& indices) {
    std::vector<Detection> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(detections[i]);
    return out;
}

}  // namespace

std::vector<std::size_t> anms_indices(std::span<const Detection> detections,
                                      const NmsConfig& config) {
    const std::size_t n = detections.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_priority(detections[a], a, detections[b], b);
    });

    std::vector<char> suppressed(n, 0);
    std::vector<std::size_t> kept;
    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t i = order[oi];
        if (suppressed[i]) continue;
        kept.push_back(i);
        const Detection& m = detections[i];
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            const std::size_t j = order[oj];
            if (suppressed[j]) continue;
            if (config.class_aware && detections[j].class_id != m.class_id) continue;
            if (iou(m.box, detections[j].box) >= config.threshold) suppressed[j] = 1;
        }
    }
    return kept;
}

std::vector<std::size_t> nms_oracle_indices(std::span<const Detection> detections,
                                            const NmsConfig& config) {
    const std::size_t n = detections.size();

    // Literal shrinking lists: the box/score/class records live in the pool
    // and get erased one by one, both for the selected maximum and for every
    // box it suppresses. The original index rides along for output identity.
    struct PoolEntry {
        BBox box;
        double score;
        int class_id;
        std::size_t original_index;
    };
    auto run_pool = [&](std::vector<PoolEntry> pool) {
        std::vector<std::size_t> kept;
        while (!pool.empty()) {
            // selectMaximumConfidence: plain scan, no sorting
            std::size_t best_at = 0;
            for (std::size_t at = 1; at < pool.size(); ++at) {
                const PoolEntry& a = pool[at];
                const PoolEntry& b = pool[best_at];
                if (a.score != b.score ? a.score > b.score
                    : a.class_id != b.class_id ? a.class_id < b.class_id
                                               : a.original_index < b.original_index) {
                    best_at = at;
                }
            }
            const PoolEntry m = pool[best_at];
            kept.push_back(m.original_index);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_at));
            for (auto it = pool.begin(); it != pool.end();) {
                if (iou(m.box, it->box) >= config.threshold) {
                    it = pool.erase(it);
                } else {
                    ++it;
                }
            }
        }
        return kept;
    };
    auto make_pool = [&](int class_filter, bool filtered) {
        std::vector<PoolEntry> pool;
        for (std::size_t i = 0; i < n; ++i) {
            if (!filtered || detections[i].class_id == class_filter) {
                pool.push_back(PoolEntry{detections[i].box, detections[i].score,
                                         detections[i].class_id, i});
            }
        }
        return pool;
    };

    std::vector<std::size_t> kept;
    if (config.class_aware) {
        std::vector<int> classes;
        for (const auto& d : detections) {
            if (std::find(classes.begin(), classes.end(), d.class_id) == classes.end()) {
                classes.push_back(d.class_id);
            }
        }
        for (int c : classes) {
            auto part = run_pool(make_pool(c, true));
            kept.insert(kept.end(), part.begin(), part.end());
        }
        // merge per-class sequences into the global emission order
        std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
            return higher_priority(detections[a], a, detections[b], b);
        });
    } else {
        kept = run_pool(make_pool(0, false));
    }
    return kept;
}

namespace {

// Batched greedy suppression over one priority-sorted candidate pool. All
// candidates in the pool may suppress each other (single class, or
// class-blind mode). The per-emission sweep is one fused branchless pass the
// compiler can vectorize; the arithmetic mirrors the scalar iou() exactly.
// Once a quarter of the remaining candidates are dead, the arrays are
// compacted so later sweeps only touch survivors.
void fast_suppress_pool(std::span<const Detection> detections,
                        std::span<const std::size_t> order, double threshold,
                        std::vector<std::size_t>& kept) {
    const std::size_t n = order.size();
    if (n == 0) return;
    if (threshold == 0.0) {
        // every pair satisfies iou >= 0, so only the top-priority box survives
        kept.push_back(order[0]);
        return;
    }

    std::vector<double> x1(n), y1(n), x2(n), y2(n), area(n), ratio(n);
    std::vector<std::size_t> idx(order.begin(), order.end());
    for (std::size_t k = 0; k < n; ++k) {
        const Detection& d = detections[idx[k]];
        x1[k] = d.box.x_min;
        y1[k] = d.box.y_min;
        x2[k] = d.box.x_max;
        y2[k] = d.box.y_max;
        area[k] = (d.box.x_max - d.box.x_min) * (d.box.y_max - d.box.y_min);
    }

    std::vector<unsigned char> suppressed(n, 0);
    std::size_t len = n;
    std::size_t pending = 0;  // marked-dead entries past the cursor
    for (std::size_t i = 0; i < len; ++i) {
        if (suppressed[i]) continue;
        kept.push_back(idx[i]);
        const double bx1 = x1[i], by1 = y1[i], bx2 = x2[i], by2 = y2[i], barea = area[i];
        // branch-free ratio sweep: when inter > 0 the union is positive, so the
        // quotient is the exact IoU; otherwise it is 0/uni = 0 (or NaN for a
        // degenerate pair), and neither reaches a positive threshold
        const double* ax1 = x1.data();
        const double* ay1 = y1.data();
        const double* ax2 = x2.data();
        const double* ay2 = y2.data();
        const double* aarea = area.data();
        double* r = ratio.data();
        for (std::size_t j = i + 1; j < len; ++j) {
            const double iw = std::min(ax2[j], bx2) - std::max(ax1[j], bx1);
            const double ih = std::min(ay2[j], by2) - std::max(ay1[j], by1);
            const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
            r[j] = inter / (aarea[j] + barea - inter);
        }
        unsigned char* sup = suppressed.data();
        std::size_t marked = 0;
        for (std::size_t j = i + 1; j < len; ++j) {
            const unsigned char hit = r[j] >= threshold ? 1 : 0;
            marked += hit & static_cast<unsigned char>(sup[j] ^ 1);
            sup[j] = static_cast<unsigned char>(sup[j] | hit);
        }
        pending += marked;
        if (pending >= 32 && pending * 4 > len - i - 1) {
            std::size_t w = i + 1;
            for (std::size_t j = i + 1; j < len; ++j) {
                if (suppressed[j]) continue;
                x1[w] = x1[j];
                y1[w] = y1[j];
                x2[w] = x2[j];
                y2[w] = y2[j];
                area[w] = area[j];
                idx[w] = idx[j];
                suppressed[w] = 0;
                ++w;
            }
            len = w;
            pending = 0;
        }
    }
}

}  // namespace

std::vector<std::size_t> nms_fast_indices(std::span<const Detection> detections,
                                          const NmsConfig& config) {
    const std::size_t n = detections.size();
    if (n == 0) return {};

    // value-packed sort keys; same total order as higher_priority
    struct SortKey {
        double score;
        std::int32_t class_id;
        std::uint32_t index;
    };
    std::vector<SortKey> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = SortKey{detections[i].score, detections[i].class_id,
                          static_cast<std::uint32_t>(i)};
    }
    std::sort(keys.begin(), keys.end(), [](const SortKey& a, const SortKey& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.class_id != b.class_id) return a.class_id < b.class_id;
        return a.index < b.index;
    });
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = keys[i].index;

    std::vector<std::size_t> kept;
    if (config.class_aware) {
        // independent per-class pools, then one merge back into global order
        std::vector<int> classes;
        std::vector<std::vector<std::size_t>> pools;
        for (std::size_t i : order) {
            const int c = detections[i].class_id;
            auto at = std::find(classes.begin(), classes.end(), c);
            if (at == classes.end()) {
                classes.push_back(c);
                pools.emplace_back();
                at = classes.end() - 1;
            }
            pools[static_cast<std::size_t>(at - classes.begin())].push_back(i);
        }
        for (const auto& pool : pools) {
            fast_suppress_pool(detections, pool, config.threshold, kept);
        }
        std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
            return higher_priority(detections[a], a, detections[b], b);
        });
    } else {
        fast_suppress_pool(detections, order, config.threshold, kept);
    }
    return kept;
}

std::vector<Detection> anms(std::span<const Detection> detections, const NmsConfig& config) {
    return materialize(detections, anms_indices(detections, config));
}

std::vector<Detection> nms_oracle(std::span<const Detection> detections, const NmsConfig& config) {
    return materialize(detections, nms_oracle_indices(detections, config));
}

std::vector<Detection> nms_fast(std::span<const Detection> detections, const NmsConfig& config) {
    return materialize(detections, nms_fast_indices(detections, config));
}

}  // namespace hazpipe

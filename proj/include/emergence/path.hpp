#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "emergence/scale_space.hpp"

namespace emergence {

/// Which CP flavor a path analysis uses: determinism+specificity-1 or
/// sufficiency+necessity-1.
enum class CpKind : std::uint8_t { detspec, primitive };

inline const char* cp_kind_name(CpKind k) {
    return k == CpKind::detspec ? "detspec" : "primitive";
}

inline double cp_value(const PrimitiveReport& r, CpKind kind) {
    return kind == CpKind::detspec ? r.cp_detspec : r.cp_primitive;
}

inline double cp_value(const ScaleNode& node, CpKind kind) {
    if (!node.primitives) {
        throw Error(errc::degenerate_size, "CP undefined for k=1 scale");
    }
    return cp_value(*node.primitives, kind);
}

/// Refinement-ordered chain of valid scales from the all-singleton
/// microscale down to the endpoint.
struct MicroMacroPath {
    std::vector<ScaleNode> nodes;
    CpKind cp_kind = CpKind::detspec;
};

struct ApportionReport {
    CpKind cp_kind = CpKind::detspec;
    std::vector<Partition> partitions;
    std::vector<double> cps;
    std::vector<double> deltas;
    double total_ce = 0.0;
    std::vector<double> p_dist;
    std::optional<double> ec_bits;
    std::optional<double> ec_normalized;
    std::size_t path_length = 0;  // number of steps (nodes - 1)
    bool has_negative_delta = false;
};

/// The CP-maximizing valid scale; ties within 1e-9 go to the largest k
/// (least dimensionality reduction), then to the lexicographically
/// smallest partition. k = 1 scales are excluded (CP undefined there).
inline ScaleNode select_endpoint(const std::vector<ScaleNode>& scales, CpKind kind) {
    const ScaleNode* best = nullptr;
    double best_cp = 0.0;
    for (const auto& node : scales) {
        if (node.partition.k < 2) continue;
        const double cp = cp_value(node, kind);
        if (!best) {
            best = &node;
            best_cp = cp;
            continue;
        }
        if (cp > best_cp + 1e-9) {
            best = &node;
            best_cp = cp;
        } else if (cp > best_cp - 1e-9) {
            if (node.partition.k > best->partition.k ||
                (node.partition.k == best->partition.k && node.partition < best->partition)) {
                best = &node;
                best_cp = std::max(best_cp, cp);
            }
        }
    }
    if (!best) throw Error(errc::bad_params, "no candidate scales with k >= 2");
    return *best;
}

/// Maximum-length refinement chain from `micro` to `endpoint` over the
/// valid scales, by longest-path DP on the refinement DAG. Among
/// equal-length chains the one passing through the highest cumulative CP
/// is preferred (the same "highest gain" principle that picks the
/// endpoint); remaining ties go to the lexicographically smallest
/// predecessor for reproducibility.
inline MicroMacroPath longest_path(const ScaleNode& micro, const ScaleNode& endpoint,
                                   const std::vector<ScaleNode>& scales,
                                   CpKind kind = CpKind::detspec) {
    if (micro.partition == endpoint.partition) {
        return MicroMacroPath{{micro}, kind};
    }
    // Candidate interior nodes: valid scales strictly between micro and
    // endpoint in the refinement order.
    std::vector<const ScaleNode*> nodes;
    nodes.push_back(&micro);
    for (const auto& s : scales) {
        if (s.partition.k >= endpoint.partition.k && s.partition.k <= micro.partition.k &&
            !(s.partition == micro.partition) && !(s.partition == endpoint.partition) &&
            refines(micro.partition, s.partition) && refines(s.partition, endpoint.partition)) {
            nodes.push_back(&s);
        }
    }
    nodes.push_back(&endpoint);

    // Process in k-descending (then lexicographic) order so that every
    // predecessor is settled before its successors.
    std::sort(nodes.begin() + 1, nodes.end() - 1, [](const ScaleNode* a, const ScaleNode* b) {
        if (a->partition.k != b->partition.k) return a->partition.k > b->partition.k;
        return a->partition < b->partition;
    });

    const auto node_cp = [&](std::size_t v) {
        return nodes[v]->primitives ? cp_value(*nodes[v]->primitives, kind) : 0.0;
    };
    const std::size_t m = nodes.size();
    std::vector<int> best_len(m, -1);
    std::vector<double> best_sum(m, 0.0);
    std::vector<std::size_t> pred(m, 0);
    best_len[0] = 0;
    best_sum[0] = node_cp(0);
    for (std::size_t v = 1; v < m; ++v) {
        for (std::size_t u = 0; u < v; ++u) {
            if (best_len[u] < 0) continue;
            if (nodes[u]->partition.k <= nodes[v]->partition.k) continue;
            if (!refines(nodes[u]->partition, nodes[v]->partition)) continue;
            const int cand = best_len[u] + 1;
            const bool better =
                cand > best_len[v] ||
                (cand == best_len[v] &&
                 (best_sum[u] > best_sum[pred[v]] ||
                  (best_sum[u] == best_sum[pred[v]] &&
                   nodes[u]->partition < nodes[pred[v]]->partition)));
            if (better) {
                best_len[v] = cand;
                best_sum[v] = best_sum[u] + node_cp(v);
                pred[v] = u;
            }
        }
    }
    if (best_len[m - 1] < 0) {
        throw Error(errc::unreachable, "no valid refinement chain from microscale to endpoint");
    }
    std::vector<ScaleNode> chain;
    for (std::size_t v = m - 1;; v = pred[v]) {
        chain.push_back(*nodes[v]);
        if (v == 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    return MicroMacroPath{std::move(chain), kind};
}

/// Step-gain entropy in bits plus its log2(L) normalization. Negative
/// gains are zeroed before normalizing. Throws NoGain when nothing is
/// positive (EC is undefined, not zero, in that case).
inline std::pair<double, double> emergent_complexity(const std::vector<double>& deltas) {
    if (deltas.empty()) throw Error(errc::no_gain, "empty path");
    double total = 0.0;
    for (double d : deltas) total += std::max(d, 0.0);
    if (total <= 0.0) throw Error(errc::no_gain, "no positive CP gains along path");
    double ec = 0.0;
    for (double d : deltas) {
        const double p = std::max(d, 0.0) / total;
        if (p > 0.0) ec -= p * std::log2(p);
    }
    const std::size_t L = deltas.size();
    const double norm = L > 1 ? ec / std::log2(static_cast<double>(L)) : 0.0;
    return {ec, norm};
}

inline ApportionReport apportion(const MicroMacroPath& path) {
    if (path.nodes.empty()) throw Error(errc::bad_params, "empty path");
    ApportionReport rep;
    rep.cp_kind = path.cp_kind;
    rep.path_length = path.nodes.size() - 1;
    for (const auto& node : path.nodes) {
        rep.partitions.push_back(node.partition);
        rep.cps.push_back(cp_value(node, path.cp_kind));
    }
    for (std::size_t i = 0; i + 1 < rep.cps.size(); ++i) {
        const double d = rep.cps[i + 1] - rep.cps[i];
        rep.deltas.push_back(d);
        rep.total_ce += d;
        if (d < 0.0) rep.has_negative_delta = true;
    }
    double pos_total = 0.0;
    for (double d : rep.deltas) pos_total += std::max(d, 0.0);
    if (pos_total > 0.0) {
        for (double d : rep.deltas) rep.p_dist.push_back(std::max(d, 0.0) / pos_total);
        auto [ec, norm] = emergent_complexity(rep.deltas);
        rep.ec_bits = ec;
        rep.ec_normalized = norm;
    }
    return rep;
}

/// First step at which gains become negligible: either delta < epsilon,
/// or the delta ratio shrinks for `window` consecutive steps.
inline std::optional<std::size_t> diminishing_returns_stop(const std::vector<double>& deltas,
                                                           double epsilon, int window) {
    if (epsilon <= 0.0) throw Error(errc::bad_params, "epsilon must be > 0");
    if (window < 2) throw Error(errc::bad_params, "window must be >= 2");
    std::optional<std::size_t> threshold_hit;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] < epsilon) {
            threshold_hit = i;
            break;
        }
    }
    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        if (deltas[i] == 0.0) break;  // ratio undefined past a zero gain
        ratios.push_back(deltas[i + 1] / deltas[i]);
    }
    // Smallest i with `window` consecutive ratio decreases starting at r_i.
    std::optional<std::size_t> ratio_hit;
    const std::size_t w = static_cast<std::size_t>(window);
    if (ratios.size() > w) {
        for (std::size_t i = 0; i + w < ratios.size() && !ratio_hit; ++i) {
            bool all_dec = true;
            for (std::size_t j = i; j < i + w; ++j) {
                if (!(ratios[j + 1] < ratios[j])) {
                    all_dec = false;
                    break;
                }
            }
            if (all_dec) ratio_hit = i;
        }
    }
    // The sub-epsilon rule is the primary stop signal; the ratio rule
    // only fires when every gain is still above threshold.
    return threshold_hit ? threshold_hit : ratio_hit;
}

/// 1 - CP(microscale): the search-free causal-emergence bound.
inline double ce_upper_bound(const Tpm& micro, const InterventionDist& pc, CpKind kind) {
    return 1.0 - cp_value(system_primitives(micro, pc), kind);
}

}  // namespace emergence

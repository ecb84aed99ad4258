#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "emergence/partition.hpp"
#include "emergence/primitives.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

/// One coarse-graining of the base system: the partition, its macro TPM,
/// its total walker-KL inconsistency, and (for k >= 2) its primitives.
/// CP is undefined at k = 1 (log2 1 = 0), hence the optional.
struct ScaleNode {
    Partition partition;
    Tpm macro_tpm;
    double divergence = 0.0;
    std::optional<PrimitiveReport> primitives;

    bool is_valid(double tol = 1e-9) const { return divergence <= tol; }
};

/// P(C) at a coarse-grained scale: uniform stays uniform over the macro
/// states; stationary/custom weights are projected through the partition.
inline InterventionDist project_pc(const InterventionDist& pc, const Partition& p) {
    if (pc.kind == InterventionDist::Kind::uniform) {
        return InterventionDist::uniform(p.k);
    }
    Vector w = Vector::Zero(p.k);
    for (int i = 0; i < p.n(); ++i) {
        w(p.assignment[static_cast<std::size_t>(i)]) += pc.weights(i);
    }
    return InterventionDist{pc.kind, std::move(w)};
}

/// Macro TPM: pc-weighted aggregation of rows, summation of columns.
/// Macro labels are unions of the constituent micro labels.
inline Tpm coarsen(const Tpm& micro, const Partition& p, const InterventionDist& pc) {
    if (p.n() != micro.n) {
        throw Error(errc::size_mismatch, "partition length " + std::to_string(p.n()) +
                                             " != n " + std::to_string(micro.n));
    }
    const int k = p.k;
    Matrix macro = Matrix::Zero(k, k);
    Vector block_mass = Vector::Zero(k);
    for (int i = 0; i < micro.n; ++i) {
        block_mass(p.assignment[static_cast<std::size_t>(i)]) += pc.weights(i);
    }
    for (int i = 0; i < micro.n; ++i) {
        const int a = p.assignment[static_cast<std::size_t>(i)];
        // Degenerate pc mass on a block: fall back to plain averaging.
        double w = block_mass(a) > 0.0 ? pc.weights(i) / block_mass(a) : 0.0;
        if (block_mass(a) <= 0.0) {
            int count = static_cast<int>(
                std::count(p.assignment.begin(), p.assignment.end(), a));
            w = 1.0 / count;
        }
        for (int j = 0; j < micro.n; ++j) {
            macro(a, p.assignment[static_cast<std::size_t>(j)]) += w * micro.rows(i, j);
        }
    }
    std::vector<Label> labels(static_cast<std::size_t>(k));
    for (int i = 0; i < micro.n; ++i) {
        const auto& src = micro.labels[static_cast<std::size_t>(i)];
        auto& dst = labels[static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(i)])];
        dst.insert(dst.end(), src.begin(), src.end());
    }
    // Aggregation can leave row sums a few ulp off 1; renormalize.
    for (int a = 0; a < k; ++a) {
        const double s = macro.row(a).sum();
        if (s > 0.0) macro.row(a) /= s;
    }
    return tpm_from_rows(std::move(macro), std::move(labels));
}

/// Total KL inconsistency between block-projected micro walkers and macro
/// walkers, summed over every start state and the first `horizon` steps.
/// Micro mass where the macro has none yields +infinity, which marks the
/// partition inconsistent.
inline double consistency_divergence(const Tpm& micro, const Partition& p,
                                     const InterventionDist& pc, int horizon = 5) {
    if (p.n() != micro.n) throw Error(errc::size_mismatch, "partition length != n");
    if (horizon < 1) throw Error(errc::bad_params, "horizon must be >= 1");
    const Tpm macro = coarsen(micro, p, pc);
    const int n = micro.n;
    const int k = p.k;

    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        Vector mu = Vector::Zero(n);
        mu(s) = 1.0;
        Vector nu = Vector::Zero(k);
        nu(p.assignment[static_cast<std::size_t>(s)]) = 1.0;
        for (int t = 0; t < horizon; ++t) {
            mu = micro.rows.transpose() * mu;
            nu = macro.rows.transpose() * nu;
            Vector proj = Vector::Zero(k);
            for (int i = 0; i < n; ++i) {
                proj(p.assignment[static_cast<std::size_t>(i)]) += mu(i);
            }
            for (int b = 0; b < k; ++b) {
                if (proj(b) > 0.0) {
                    if (nu(b) <= 0.0) return std::numeric_limits<double>::infinity();
                    total += proj(b) * std::log2(proj(b) / nu(b));
                }
            }
        }
    }
    // KL is non-negative; clear rounding residue from near-exact matches.
    return std::max(total, 0.0);
}

/// Builds the ScaleNode for one partition (primitives only when k >= 2).
inline ScaleNode make_scale_node(const Tpm& micro, const Partition& p,
                                 const InterventionDist& pc, int horizon = 5) {
    ScaleNode node;
    node.partition = p;
    node.macro_tpm = coarsen(micro, p, pc);
    node.divergence = consistency_divergence(micro, p, pc, horizon);
    if (p.k >= 2) {
        node.primitives = system_primitives(node.macro_tpm, project_pc(pc, p));
    }
    return node;
}

struct ScanOptions {
    double tol = 1e-9;
    int horizon = 5;
    int max_states = 12;
    int threads = 1;
};

/// All dynamically consistent macroscales of `micro`, including the
/// all-singleton microscale node, ordered by (k descending, lexicographic).
inline std::vector<ScaleNode> valid_macroscales(const Tpm& micro, const InterventionDist& pc,
                                                const ScanOptions& opts = {}) {
    std::vector<Partition> parts = enumerate_partitions(micro.n, opts.max_states);
    std::vector<std::optional<ScaleNode>> slots(parts.size());

    const int nthreads = std::max(1, opts.threads);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double div = consistency_divergence(micro, parts[i], pc, opts.horizon);
            if (div <= opts.tol) {
                ScaleNode node;
                node.partition = parts[i];
                node.macro_tpm = coarsen(micro, parts[i], pc);
                node.divergence = div;
                if (parts[i].k >= 2) {
                    node.primitives =
                        system_primitives(node.macro_tpm, project_pc(pc, parts[i]));
                }
                slots[i] = std::move(node);
            }
        }
    };
    if (nthreads == 1) {
        work(0, parts.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (parts.size() + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const std::size_t b = std::min(parts.size(), static_cast<std::size_t>(t) * chunk);
            const std::size_t e = std::min(parts.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<ScaleNode> out;
    for (auto& s : slots) {
        if (s) out.push_back(std::move(*s));
    }
    std::sort(out.begin(), out.end(), [](const ScaleNode& a, const ScaleNode& b) {
        if (a.partition.k != b.partition.k) return a.partition.k > b.partition.k;
        return a.partition < b.partition;
    });
    return out;
}

}  // namespace emergence

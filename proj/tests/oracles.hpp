// Independent oracles for cross-checking the library. These deliberately
// re-derive every quantity with naive loops and must stay decoupled from
// the implementation headers' computation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "emergence/partition.hpp"
#include "emergence/tpm.hpp"

namespace oracle {

using emergence::Matrix;
using emergence::Partition;
using emergence::Tpm;

struct Primitives {
    double sufficiency, necessity, determinism, degeneracy;
};

// Naive direct summation of the system-wide primitives under uniform P(C).
inline Primitives brute_force_primitives(const Tpm& tpm) {
    const int n = tpm.n;
    const long double pc = 1.0L / n;
    const long double log_n = std::log2(static_cast<long double>(n));

    long double suff_sys = 0, nec_sys = 0, det_sys = 0;
    for (int c = 0; c < n; ++c) {
        for (int e = 0; e < n; ++e) {
            const long double p = tpm.rows(c, e);
            if (p <= 0) continue;
            suff_sys += pc * p * p;
            long double others = 0, rest = 0;
            for (int c2 = 0; c2 < n; ++c2) {
                if (c2 == c) continue;
                others += pc * static_cast<long double>(tpm.rows(c2, e));
                rest += pc;
            }
            nec_sys += pc * p * (1.0L - others / rest);
        }
        long double h = 0;
        for (int e = 0; e < n; ++e) {
            const long double p = tpm.rows(c, e);
            if (p > 0) h += p * std::log2(1.0L / p);
        }
        det_sys += pc * (1.0L - h / log_n);
    }
    long double h_agg = 0;
    for (int e = 0; e < n; ++e) {
        long double pe = 0;
        for (int c = 0; c < n; ++c) pe += pc * static_cast<long double>(tpm.rows(c, e));
        if (pe > 0) h_agg += pe * std::log2(1.0L / pe);
    }
    return {static_cast<double>(suff_sys), static_cast<double>(nec_sys),
            static_cast<double>(det_sys), static_cast<double>(1.0L - h_agg / log_n)};
}

// Largest block-profile disagreement within any block of `p`; zero
// exactly when the chain is strongly lumpable with respect to `p`.
inline double lumpability_mismatch(const Tpm& tpm, const Partition& p) {
    const int n = tpm.n;
    double worst = 0.0;
    for (int block = 0; block < p.k; ++block) {
        std::vector<double> ref;
        for (int i = 0; i < n; ++i) {
            if (p.assignment[static_cast<std::size_t>(i)] != block) continue;
            std::vector<double> prof(static_cast<std::size_t>(p.k), 0.0);
            for (int j = 0; j < n; ++j) {
                prof[static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(j)])] +=
                    tpm.rows(i, j);
            }
            if (ref.empty()) {
                ref = prof;
            } else {
                for (int b = 0; b < p.k; ++b) {
                    worst = std::max(worst, std::abs(prof[static_cast<std::size_t>(b)] -
                                                     ref[static_cast<std::size_t>(b)]));
                }
            }
        }
    }
    return worst;
}

// Strong lumpability: within every block, all states share the same
// block-projected transition profile.
inline bool strongly_lumpable(const Tpm& tpm, const Partition& p, double tol = 1e-12) {
    return lumpability_mismatch(tpm, p) <= tol;
}

// A random matrix can miss lumpability by a coincidentally tiny margin
// (two block sums agreeing to ~1e-4), which puts its walker divergence
// in no-man's-land between the pass and fail thresholds. Classification
// tests need every partition to be cleanly lumpable or cleanly not.
inline bool well_separated(const Tpm& tpm, double margin = 5e-3) {
    for (const auto& p : emergence::enumerate_partitions(tpm.n)) {
        const double m = lumpability_mismatch(tpm, p);
        if (m > 1e-12 && m < margin) return false;
    }
    return true;
}

// Bell numbers by the Bell-triangle recurrence.
inline std::uint64_t bell_number(int n) {
    std::vector<std::uint64_t> row = {1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next;
        next.push_back(row.back());
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

// Seeded dense random TPM.
inline Tpm random_tpm(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    Matrix rows(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            rows(i, j) = dist(rng);
            sum += rows(i, j);
        }
        rows.row(i) /= sum;
    }
    return emergence::tpm_from_rows(std::move(rows));
}

// Seeded TPM with duplicated rows inside randomly chosen classes, so a
// nontrivial set of partitions is strongly lumpable.
inline Tpm random_lumpable_tpm(int n, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    std::uniform_int_distribution<int> pick(0, classes - 1);
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cls[static_cast<std::size_t>(i)] = i < classes ? i : pick(rng);
    Matrix proto(classes, n);
    for (int c = 0; c < classes; ++c) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            proto(c, j) = dist(rng);
            sum += proto(c, j);
        }
        proto.row(c) /= sum;
    }
    Matrix rows(n, n);
    for (int i = 0; i < n; ++i) rows.row(i) = proto.row(cls[static_cast<std::size_t>(i)]);
    return emergence::tpm_from_rows(std::move(rows));
}

// Rejection-sampled variants of the two generators above that skip
// near-lumpable coincidences (see well_separated). Deterministic: the
// sub-seed sequence depends only on (n, seed).
inline Tpm separated_random_tpm(int n, std::uint64_t seed) {
    for (std::uint64_t off = 0;; off += 1000003) {
        Tpm t = random_tpm(n, seed + off);
        if (well_separated(t)) return t;
    }
}

inline Tpm separated_lumpable_tpm(int n, int classes, std::uint64_t seed) {
    for (std::uint64_t off = 0;; off += 1000003) {
        Tpm t = random_lumpable_tpm(n, classes, seed + off);
        if (well_separated(t)) return t;
    }
}

// Seeded random permutation matrix.
inline Tpm random_permutation_tpm(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix rows = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) rows(i, perm[static_cast<std::size_t>(i)]) = 1.0;
    return emergence::tpm_from_rows(std::move(rows));
}

// Seeded random set partition (not necessarily canonical input).
inline Partition random_partition(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = pick(rng);
    return emergence::partition_from_assignment(raw);
}

}  // namespace oracle

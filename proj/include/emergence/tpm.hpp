#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "emergence/error.hpp"

namespace emergence {

inline constexpr double kProbTol = 1e-9;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A state label is the set of microstate indices the state represents.
/// Singletons at the microscale; unions after coarse-graining.
using Label = std::vector<int>;

/// Row-stochastic transition matrix over a labeled finite statespace.
/// Immutable after construction; construct through tpm_from_rows.
struct Tpm {
    int n = 0;
    Matrix rows;
    std::vector<Label> labels;
};

inline std::vector<Label> singleton_labels(int n) {
    std::vector<Label> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {i};
    return out;
}

/// Validates and packages a row matrix as a Tpm. Labels default to
/// singletons {0}..{n-1}.
inline Tpm tpm_from_rows(Matrix rows, std::vector<Label> labels = {}) {
    if (rows.rows() != rows.cols() || rows.rows() < 1) {
        throw Error(errc::not_square,
                    "expected square matrix, got " + std::to_string(rows.rows()) + "x" +
                        std::to_string(rows.cols()));
    }
    const int n = static_cast<int>(rows.rows());
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p = rows(i, j);
            if (p < 0.0) {
                throw Error(errc::negative_entry, "row " + std::to_string(i) + " col " +
                                                      std::to_string(j));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            throw Error(errc::non_stochastic_row,
                        "row " + std::to_string(i) + " sums to " + std::to_string(sum));
        }
    }
    if (labels.empty()) labels = singleton_labels(n);
    if (static_cast<int>(labels.size()) != n) {
        throw Error(errc::size_mismatch, "label count != n");
    }
    // Labels must be disjoint, non-empty, and cover a contiguous index set.
    std::set<int> seen;
    std::size_t total = 0;
    for (auto& lab : labels) {
        if (lab.empty()) throw Error(errc::size_mismatch, "empty label");
        std::sort(lab.begin(), lab.end());
        total += lab.size();
        seen.insert(lab.begin(), lab.end());
    }
    if (seen.size() != total) throw Error(errc::size_mismatch, "labels overlap");
    return Tpm{n, std::move(rows), std::move(labels)};
}

/// True iff the matrix is a permutation: one-hot rows, each column hit once.
inline bool is_permutation(const Tpm& tpm) {
    std::vector<int> col_hits(static_cast<std::size_t>(tpm.n), 0);
    for (int i = 0; i < tpm.n; ++i) {
        int ones = 0;
        for (int j = 0; j < tpm.n; ++j) {
            const double p = tpm.rows(i, j);
            if (std::abs(p - 1.0) <= kProbTol) {
                ++ones;
                ++col_hits[static_cast<std::size_t>(j)];
            } else if (std::abs(p) > kProbTol) {
                return false;
            }
        }
        if (ones != 1) return false;
    }
    return std::all_of(col_hits.begin(), col_hits.end(), [](int c) { return c == 1; });
}

/// Distribution P(C) over candidate causes.
struct InterventionDist {
    enum class Kind : std::uint8_t { uniform, stationary, custom };

    Kind kind = Kind::uniform;
    Vector weights;

    static InterventionDist uniform(int n) {
        return InterventionDist{Kind::uniform, Vector::Constant(n, 1.0 / n)};
    }

    static InterventionDist custom(Vector w) {
        double sum = 0.0;
        for (int i = 0; i < w.size(); ++i) {
            if (w(i) < 0.0) throw Error(errc::negative_entry, "negative weight");
            sum += w(i);
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            throw Error(errc::non_stochastic_row, "weights sum to " + std::to_string(sum));
        }
        return InterventionDist{Kind::custom, std::move(w)};
    }
};

/// Long-run distribution by power iteration from the uniform start.
inline InterventionDist stationary_distribution(const Tpm& tpm, int max_iters = 200000,
                                                double tol = 1e-12) {
    Vector w = Vector::Constant(tpm.n, 1.0 / tpm.n);
    for (int it = 0; it < max_iters; ++it) {
        Vector next = tpm.rows.transpose() * w;
        if ((next - w).lpNorm<1>() <= tol) {
            return InterventionDist{InterventionDist::Kind::stationary, std::move(next)};
        }
        w = std::move(next);
    }
    throw Error(errc::no_convergence,
                "power iteration did not converge in " + std::to_string(max_iters) + " iters");
}

}  // namespace emergence

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "emergence/tpm.hpp"

namespace emergence {

/// A deterministic sequence of TPM frames produced by one of the
/// probability-redistribution generators. frames.size() == steps + 1.
struct Schedule {
    enum class Kind : std::uint8_t { noise_axis, common_cause_axis, combined, fig4_selfloop };

    Kind kind = Kind::noise_axis;
    int steps = 0;
    std::vector<Tpm> frames;
};

inline const char* schedule_kind_name(Schedule::Kind k) {
    switch (k) {
        case Schedule::Kind::noise_axis: return "noise";
        case Schedule::Kind::common_cause_axis: return "common_cause";
        case Schedule::Kind::combined: return "combined";
        case Schedule::Kind::fig4_selfloop: return "fig4";
    }
    return "unknown";
}

/// Block-diagonal model: each state transitions uniformly over its own
/// block, so states within a block form an exact equivalency class.
inline Tpm make_block_model(const std::vector<int>& block_sizes) {
    if (block_sizes.empty()) throw Error(errc::empty_spec, "no blocks given");
    int n = 0;
    for (int b : block_sizes) {
        if (b < 1) throw Error(errc::bad_params, "block size must be >= 1");
        n += b;
    }
    Matrix rows = Matrix::Zero(n, n);
    int offset = 0;
    for (int b : block_sizes) {
        for (int i = 0; i < b; ++i) {
            for (int j = 0; j < b; ++j) {
                rows(offset + i, offset + j) = 1.0 / b;
            }
        }
        offset += b;
    }
    return tpm_from_rows(std::move(rows));
}

inline Tpm make_identity(int n) {
    if (n < 1) throw Error(errc::bad_params, "n must be >= 1");
    return tpm_from_rows(Matrix::Identity(n, n));
}

inline Tpm make_uniform(int n) {
    if (n < 1) throw Error(errc::bad_params, "n must be >= 1");
    return tpm_from_rows(Matrix::Constant(n, n, 1.0 / n));
}

/// Self-loop mass bled uniformly onto the rest of the row, reaching full
/// randomness exactly at the last step: frame t = (1 - t/steps) * I +
/// (t/steps) * U, identity at t=0, uniform matrix at t=steps.
inline Schedule noise_schedule(int n, int steps) {
    if (n < 2 || steps < 1) throw Error(errc::bad_params, "need n >= 2 and steps >= 1");
    Schedule sched{Schedule::Kind::noise_axis, steps, {}};
    for (int t = 0; t <= steps; ++t) {
        const double tau = static_cast<double>(t) / steps;
        Matrix rows = Matrix::Constant(n, n, tau / n);
        rows.diagonal().array() += 1.0 - tau;
        sched.frames.push_back(tpm_from_rows(std::move(rows)));
    }
    return sched;
}

/// Identity rows replaced one at a time by a duplicate of row 0; ends
/// with every state transitioning to state 0.
inline Schedule common_cause_schedule(int n, int steps = -1) {
    if (n < 2) throw Error(errc::bad_params, "need n >= 2");
    if (steps < 0) steps = n - 1;
    if (steps < 1 || steps > n - 1) {
        throw Error(errc::bad_params, "steps must be in [1, n-1]");
    }
    Schedule sched{Schedule::Kind::common_cause_axis, steps, {}};
    for (int t = 0; t <= steps; ++t) {
        Matrix rows = Matrix::Identity(n, n);
        for (int r = 1; r <= t; ++r) {
            rows.row(r).setZero();
            rows(r, 0) = 1.0;
        }
        sched.frames.push_back(tpm_from_rows(std::move(rows)));
    }
    return sched;
}

/// Both axes at once: at step t the first round(t*(n-1)/steps) rows are
/// duplicates of row 0, then each row's one-hot mass is smeared by t/steps
/// onto the other states. Ends at the uniform matrix.
inline Schedule combined_schedule(int n, int steps) {
    if (n < 2 || steps < 1) throw Error(errc::bad_params, "need n >= 2 and steps >= 1");
    Schedule sched{Schedule::Kind::combined, steps, {}};
    for (int t = 0; t <= steps; ++t) {
        const int dup =
            static_cast<int>((static_cast<long long>(t) * (n - 1) + steps / 2) / steps);
        const double tau = static_cast<double>(t) / steps;
        Matrix rows = Matrix::Constant(n, n, tau / n);
        for (int r = 0; r < n; ++r) {
            const int hot = (r >= 1 && r <= dup) ? 0 : r;
            rows(r, hot) += 1.0 - tau;
        }
        sched.frames.push_back(tpm_from_rows(std::move(rows)));
    }
    return sched;
}

/// Within-block off-diagonal mass folded into the self-loop, 1/steps per
/// step; block model at t=0, identity at t=steps.
inline Schedule fig4_schedule(const std::vector<int>& block_sizes = {4, 4}, int steps = 50) {
    if (block_sizes.empty()) throw Error(errc::empty_spec, "no blocks given");
    if (steps < 1) throw Error(errc::bad_params, "steps must be >= 1");
    int n = 0;
    for (int b : block_sizes) {
        if (b < 1) throw Error(errc::bad_params, "block size must be >= 1");
        n += b;
    }
    Schedule sched{Schedule::Kind::fig4_selfloop, steps, {}};
    for (int t = 0; t <= steps; ++t) {
        const double tau = static_cast<double>(t) / steps;
        Matrix rows = Matrix::Zero(n, n);
        int offset = 0;
        for (int b : block_sizes) {
            const double off = (1.0 / b) * (1.0 - tau);
            const double self = 1.0 / b + (1.0 - 1.0 / b) * tau;
            for (int i = 0; i < b; ++i) {
                for (int j = 0; j < b; ++j) {
                    rows(offset + i, offset + j) = i == j ? self : off;
                }
            }
            offset += b;
        }
        sched.frames.push_back(tpm_from_rows(std::move(rows)));
    }
    return sched;
}

/// Block model with the first state of each block (size >= 2) perturbed:
/// mass delta moves from that state's own column onto the block's second
/// state. Block-projected rows are unchanged, so the block coarse-grain
/// stays strictly lumpable while intermediate scales gain structure.
inline Tpm make_mesoscale_variant(const std::vector<int>& block_sizes = {4, 4},
                                  double delta = 0.2) {
    if (delta < 0.0 || delta >= 1.0) throw Error(errc::bad_params, "delta must be in [0, 1)");
    Tpm base = make_block_model(block_sizes);
    Matrix rows = base.rows;
    int offset = 0;
    for (int b : block_sizes) {
        if (b >= 2) {
            if (delta > 1.0 / b) {
                throw Error(errc::bad_params, "delta exceeds within-block uniform mass");
            }
            rows(offset, offset) -= delta;
            rows(offset, offset + 1) += delta;
        }
        offset += b;
    }
    return tpm_from_rows(std::move(rows));
}

}  // namespace emergence

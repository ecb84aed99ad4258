#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <utility>
#include <vector>

#include "emergence/tpm.hpp"

namespace emergence {

/// Singular-value summary of a TPM. sigma_1 is the trivial leading value
/// (always >= 1 for a stochastic matrix); gamma_star averages the rest.
/// ce2_estimate = sigma_2 - gamma_star, clamped at 0.
struct SvdReport {
    std::vector<double> sigmas;  // descending
    double gamma = 0.0;          // mean of all sigmas
    double gamma_star = 0.0;     // mean of sigmas[1..]
    double ce2_estimate = 0.0;
    double ce1_vague = 0.0;  // thresholded mean minus gamma
    std::vector<std::pair<int, double>> positive_contributions;  // (i, sigma_i - gamma_star)
};

inline SvdReport svd_report(const Tpm& tpm, double epsilon = 1e-9) {
    if (tpm.n < 2) throw Error(errc::degenerate_size, "n must be >= 2");
    Eigen::JacobiSVD<Matrix> svd(tpm.rows);
    if (svd.info() != Eigen::Success) {
        throw Error(errc::decomposition_failure, "SVD did not converge");
    }
    SvdReport r;
    const Vector& sv = svd.singularValues();  // Eigen returns descending order
    r.sigmas.assign(sv.data(), sv.data() + sv.size());

    const int n = tpm.n;
    double sum = 0.0;
    for (double s : r.sigmas) sum += s;
    r.gamma = sum / n;
    r.gamma_star = (sum - r.sigmas[0]) / (n - 1);
    r.ce2_estimate = std::max(r.sigmas[1] - r.gamma_star, 0.0);

    double thr_sum = 0.0;
    int thr_count = 0;
    for (double s : r.sigmas) {
        if (s > epsilon) {
            thr_sum += s;
            ++thr_count;
        }
    }
    r.ce1_vague = thr_count > 0 ? thr_sum / thr_count - r.gamma : 0.0;

    for (int i = 1; i < n; ++i) {
        const double c = r.sigmas[static_cast<std::size_t>(i)] - r.gamma_star;
        // kProbTol keeps rounding residue in the trailing sigmas of
        // rank-deficient matrices from registering as structure.
        if (c > kProbTol) r.positive_contributions.emplace_back(i + 1, c);  // 1-based sigma index
    }
    return r;
}

/// Per-directionality contributions sigma_i - gamma_star for i >= 2 with
/// sigma_i above the gamma_star mean, descending. Two or more entries
/// signal mesoscale structure.
inline std::vector<std::pair<int, double>> svd_multiscale_profile(const Tpm& tpm) {
    return svd_report(tpm).positive_contributions;
}

}  // namespace emergence

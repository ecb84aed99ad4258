#pragma once

#include <cmath>

#include "emergence/tpm.hpp"

namespace emergence {

/// Causal-primitive values for one scale. cp_primitive = suff + nec - 1,
/// reported unclamped; cp_primitive_in_bounds flags the [0,1] check.
/// cp_detspec = determinism - degeneracy (the effectiveness).
struct PrimitiveReport {
    int n = 0;
    double sufficiency = 0.0;
    double necessity = 0.0;
    double determinism = 0.0;
    double degeneracy = 0.0;
    double specificity = 0.0;
    double cp_primitive = 0.0;
    double cp_detspec = 0.0;
    double ei_bits = 0.0;
    bool cp_primitive_in_bounds = true;
};

namespace detail {

// Shannon entropy in bits with the 0 log 0 = 0 convention.
template <class Derived>
double entropy_bits(const Eigen::MatrixBase<Derived>& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double v = p(i);
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

inline void check_state(const Tpm& tpm, int s, const char* name) {
    if (s < 0 || s >= tpm.n) {
        throw Error(errc::index_out_of_range,
                    std::string(name) + "=" + std::to_string(s) + " for n=" +
                        std::to_string(tpm.n));
    }
}

}  // namespace detail

/// suff(e,c) = P(e|c).
inline double suff(const Tpm& tpm, int c, int e) {
    detail::check_state(tpm, c, "c");
    detail::check_state(tpm, e, "e");
    return tpm.rows(c, e);
}

/// nec(e,c) = 1 - P(e | C, not-c), with the not-c set weighted by pc.
inline double nec(const Tpm& tpm, int c, int e, const InterventionDist& pc) {
    detail::check_state(tpm, c, "c");
    detail::check_state(tpm, e, "e");
    const double mass_c = pc.weights(c);
    const double rest = 1.0 - mass_c;
    if (rest <= kProbTol) {
        throw Error(errc::undefined_conditional, "pc puts all mass on c=" + std::to_string(c));
    }
    double num = 0.0;
    for (int cp = 0; cp < tpm.n; ++cp) {
        if (cp != c) num += pc.weights(cp) * tpm.rows(cp, e);
    }
    return 1.0 - num / rest;
}

/// System-wide primitives, transition-weighted by pc(c) * P(e|c).
inline PrimitiveReport system_primitives(const Tpm& tpm, const InterventionDist& pc) {
    const int n = tpm.n;
    if (n < 2) throw Error(errc::degenerate_size, "n must be >= 2");
    const double log_n = std::log2(static_cast<double>(n));

    PrimitiveReport r;
    r.n = n;

    // P(e|C) = sum_c pc(c) P(e|c)
    const Vector pe = tpm.rows.transpose() * pc.weights;

    for (int c = 0; c < n; ++c) {
        const double wc = pc.weights(c);
        if (wc == 0.0) continue;
        double suff_c = 0.0;
        double nec_c = 0.0;
        const double rest = 1.0 - wc;
        for (int e = 0; e < n; ++e) {
            const double p = tpm.rows(c, e);
            if (p == 0.0) continue;
            suff_c += p * p;
            if (rest > kProbTol) {
                // pe already contains c's own contribution; remove it.
                const double others = pe(e) - wc * p;
                nec_c += p * (1.0 - others / rest);
            } else {
                throw Error(errc::undefined_conditional, "pc puts all mass on one cause");
            }
        }
        r.sufficiency += wc * suff_c;
        r.necessity += wc * nec_c;
        r.determinism += wc * (1.0 - detail::entropy_bits(tpm.rows.row(c)) / log_n);
    }

    r.degeneracy = 1.0 - detail::entropy_bits(pe) / log_n;
    r.specificity = 1.0 - r.degeneracy;
    r.cp_primitive = r.sufficiency + r.necessity - 1.0;
    r.cp_detspec = r.determinism - r.degeneracy;
    r.ei_bits = r.cp_detspec * log_n;
    r.cp_primitive_in_bounds =
        r.cp_primitive >= -kProbTol && r.cp_primitive <= 1.0 + kProbTol;
    return r;
}

inline double effective_information(const Tpm& tpm, const InterventionDist& pc) {
    return system_primitives(tpm, pc).ei_bits;
}

}  // namespace emergence

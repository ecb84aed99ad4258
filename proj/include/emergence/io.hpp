#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emergence/path.hpp"
#include "emergence/primitives.hpp"
#include "emergence/scale_space.hpp"
#include "emergence/svd.hpp"
#include "emergence/tpm.hpp"

namespace emergence {

using json = nlohmann::json;

/// Fixed 12-significant-digit float formatting for CSV emission.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---- TPM formats -----------------------------------------------------------
// JSON: {"n": int, "labels": [[int,...],...], "rows": [[float,...],...]}
// CSV:  n rows of n comma-separated floats, labels implicit singletons.

inline json tpm_to_json(const Tpm& tpm) {
    json j;
    j["n"] = tpm.n;
    j["labels"] = tpm.labels;
    json rows = json::array();
    for (int i = 0; i < tpm.n; ++i) {
        json row = json::array();
        for (int k = 0; k < tpm.n; ++k) row.push_back(tpm.rows(i, k));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline Tpm tpm_from_json(const json& j) {
    try {
        const auto& jrows = j.at("rows");
        const int n = static_cast<int>(jrows.size());
        if (n < 1) throw Error(errc::parse_error, "empty rows");
        Matrix rows(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(jrows[i].size()) != n) {
                throw Error(errc::not_square, "ragged rows");
            }
            for (int k = 0; k < n; ++k) rows(i, k) = jrows[i][k].get<double>();
        }
        std::vector<Label> labels;
        if (j.contains("labels")) labels = j["labels"].get<std::vector<Label>>();
        return tpm_from_rows(std::move(rows), std::move(labels));
    } catch (const json::exception& e) {
        throw Error(errc::parse_error, e.what());
    }
}

inline Tpm tpm_from_csv(std::istream& in) {
    std::vector<std::vector<double>> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(tok, &pos));
            } catch (const std::exception&) {
                throw Error(errc::parse_error, "bad CSV number '" + tok + "'");
            }
        }
        vals.push_back(std::move(row));
    }
    if (vals.empty()) throw Error(errc::parse_error, "empty CSV");
    const int n = static_cast<int>(vals.size());
    Matrix rows(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(vals[static_cast<std::size_t>(i)].size()) != n) {
            throw Error(errc::not_square, "CSV row length != row count");
        }
        for (int k = 0; k < n; ++k) rows(i, k) = vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return tpm_from_rows(std::move(rows));
}

/// Loads a TPM from a .json or .csv path (sniffed by extension, JSON by
/// default).
inline Tpm load_tpm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::parse_error, "cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        return tpm_from_csv(in);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(errc::parse_error, e.what());
    }
    return tpm_from_json(j);
}

// ---- Reports ---------------------------------------------------------------

inline json primitive_report_to_json(const PrimitiveReport& r) {
    json j;
    j["n"] = r.n;
    j["sufficiency"] = r.sufficiency;
    j["necessity"] = r.necessity;
    j["determinism"] = r.determinism;
    j["degeneracy"] = r.degeneracy;
    j["specificity"] = r.specificity;
    j["cp_primitive"] = r.cp_primitive;
    j["cp_detspec"] = r.cp_detspec;
    j["ei_bits"] = r.ei_bits;
    if (!r.cp_primitive_in_bounds) j["cp_primitive_out_of_bounds"] = true;
    return j;
}

inline std::string primitive_report_to_csv(const PrimitiveReport& r) {
    std::string out =
        "n,sufficiency,necessity,determinism,degeneracy,specificity,cp_primitive,"
        "cp_detspec,ei_bits\n";
    out += std::to_string(r.n) + ',' + csv_num(r.sufficiency) + ',' + csv_num(r.necessity) +
           ',' + csv_num(r.determinism) + ',' + csv_num(r.degeneracy) + ',' +
           csv_num(r.specificity) + ',' + csv_num(r.cp_primitive) + ',' +
           csv_num(r.cp_detspec) + ',' + csv_num(r.ei_bits) + '\n';
    return out;
}

inline json apportion_report_to_json(const ApportionReport& r,
                                     std::optional<std::size_t> diminishing_index = {}) {
    json j;
    j["cp_kind"] = cp_kind_name(r.cp_kind);
    json parts = json::array();
    for (const auto& p : r.partitions) parts.push_back(p.to_string());
    j["partitions"] = std::move(parts);
    j["cps"] = r.cps;
    j["deltas"] = r.deltas;
    j["total_ce"] = r.total_ce;
    j["p_dist"] = r.p_dist;
    j["path_length"] = r.path_length;
    if (r.ec_bits) {
        j["ec_bits"] = *r.ec_bits;
        j["ec_normalized"] = *r.ec_normalized;
    } else {
        j["ec_bits"] = nullptr;
        j["ec_normalized"] = nullptr;
    }
    j["has_negative_delta"] = r.has_negative_delta;
    if (diminishing_index) {
        j["diminishing_returns_index"] = *diminishing_index;
    } else {
        j["diminishing_returns_index"] = nullptr;
    }
    return j;
}

/// CSV of (step, k, cp, delta) rows for plotting; step 0 is the microscale
/// with an empty delta.
inline std::string apportion_report_to_csv(const ApportionReport& r) {
    std::string out = "step,k,cp,delta\n";
    for (std::size_t i = 0; i < r.cps.size(); ++i) {
        out += std::to_string(i) + ',' + std::to_string(r.partitions[i].k) + ',' +
               csv_num(r.cps[i]);
        out += i == 0 ? "," : "," + csv_num(r.deltas[i - 1]);
        out += '\n';
    }
    return out;
}

inline json svd_report_to_json(const SvdReport& r) {
    json j;
    j["sigmas"] = r.sigmas;
    j["gamma"] = r.gamma;
    j["gamma_star"] = r.gamma_star;
    j["ce2_estimate"] = r.ce2_estimate;
    j["ce1_vague"] = r.ce1_vague;
    json contrib = json::array();
    for (const auto& [i, c] : r.positive_contributions) {
        contrib.push_back(json{{"sigma_index", i}, {"contribution", c}});
    }
    j["positive_contributions"] = std::move(contrib);
    return j;
}

inline std::string svd_report_to_csv(const SvdReport& r) {
    std::string out = "i,sigma,contribution\n";
    for (std::size_t i = 0; i < r.sigmas.size(); ++i) {
        out += std::to_string(i + 1) + ',' + csv_num(r.sigmas[i]);
        const double c = i >= 1 ? r.sigmas[i] - r.gamma_star : 0.0;
        out += i >= 1 && c > 0.0 ? "," + csv_num(c) : ",";
        out += '\n';
    }
    return out;
}

inline json scan_to_json(const std::vector<ScaleNode>& nodes, CpKind kind) {
    json j = json::array();
    for (const auto& node : nodes) {
        json row;
        row["partition"] = node.partition.to_string();
        row["k"] = node.partition.k;
        row["divergence"] = node.divergence;
        if (node.primitives) {
            row["cp"] = cp_value(*node.primitives, kind);
        } else {
            row["cp"] = nullptr;  // k=1, CP undefined
        }
        j.push_back(std::move(row));
    }
    return j;
}

inline std::string scan_to_csv(const std::vector<ScaleNode>& nodes, CpKind kind) {
    std::string out = "partition,k,divergence,cp\n";
    for (const auto& node : nodes) {
        out += '"' + node.partition.to_string() + "\"," +
               std::to_string(node.partition.k) + ',' + csv_num(node.divergence) + ',';
        out += node.primitives ? csv_num(cp_value(*node.primitives, kind)) : "undefined";
        out += '\n';
    }
    return out;
}

}  // namespace emergence

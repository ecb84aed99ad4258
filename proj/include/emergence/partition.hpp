#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "emergence/error.hpp"

namespace emergence {

/// A set partition of {0..n-1} in restricted-growth form:
/// assignment[0] == 0 and assignment[i] <= 1 + max(assignment[0..i-1]).
/// The canonical form makes each set partition a unique vector.
struct Partition {
    std::vector<int> assignment;
    int k = 0;

    int n() const { return static_cast<int>(assignment.size()); }

    bool operator==(const Partition& other) const { return assignment == other.assignment; }

    /// Lexicographic order on the restricted-growth vector.
    bool operator<(const Partition& other) const { return assignment < other.assignment; }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
        for (int i = 0; i < n(); ++i) {
            out[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
        }
        return out;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(assignment[i]);
        }
        return s;
    }
};

/// Canonicalizes an arbitrary block-index vector into restricted-growth form.
inline Partition partition_from_assignment(const std::vector<int>& raw) {
    if (raw.empty()) throw Error(errc::bad_params, "empty assignment");
    std::vector<int> relabel;
    Partition p;
    p.assignment.reserve(raw.size());
    for (int v : raw) {
        auto it = std::find(relabel.begin(), relabel.end(), v);
        int idx;
        if (it == relabel.end()) {
            idx = static_cast<int>(relabel.size());
            relabel.push_back(v);
        } else {
            idx = static_cast<int>(it - relabel.begin());
        }
        p.assignment.push_back(idx);
    }
    p.k = static_cast<int>(relabel.size());
    return p;
}

/// Parses the comma-separated restricted-growth text format,
/// e.g. "0,0,0,0,1,1,1,1".
inline Partition parse_partition(const std::string& text) {
    std::vector<int> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw Error(errc::parse_error, "bad partition token '" + tok + "'");
        }
    }
    if (vals.empty()) throw Error(errc::parse_error, "empty partition string");
    return partition_from_assignment(vals);
}

inline Partition singleton_partition(int n) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i;
    return Partition{std::move(a), n};
}

/// True iff every block of `fine` is contained in a single block of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse) {
    if (fine.n() != coarse.n()) throw Error(errc::size_mismatch, "partition lengths differ");
    // Within each fine block, all members must share a coarse block.
    std::vector<int> block_target(static_cast<std::size_t>(fine.k), -1);
    for (int i = 0; i < fine.n(); ++i) {
        const int fb = fine.assignment[static_cast<std::size_t>(i)];
        const int cb = coarse.assignment[static_cast<std::size_t>(i)];
        int& tgt = block_target[static_cast<std::size_t>(fb)];
        if (tgt == -1) {
            tgt = cb;
        } else if (tgt != cb) {
            return false;
        }
    }
    return true;
}

/// Streams all Bell(n) partitions in lexicographic restricted-growth order,
/// starting at the single block "0,0,...,0".
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(int n, int max_n = 12) : n_(n) {
        if (n < 1) throw Error(errc::bad_params, "n must be >= 1");
        if (n > max_n) {
            throw Error(errc::too_large, "n=" + std::to_string(n) + " exceeds enumeration cap " +
                                             std::to_string(max_n));
        }
        a_.assign(static_cast<std::size_t>(n), 0);
        b_.assign(static_cast<std::size_t>(n), 0);  // b_[i] = max(a_[0..i-1])
    }

    std::optional<Partition> next() {
        if (done_) return std::nullopt;
        Partition out = partition_from_assignment(a_);
        // Restricted-growth successor: rightmost position that can grow.
        int i = n_ - 1;
        while (i > 0 && a_[static_cast<std::size_t>(i)] > b_[static_cast<std::size_t>(i)]) --i;
        if (i == 0) {
            done_ = true;
            return out;
        }
        ++a_[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n_; ++j) {
            b_[static_cast<std::size_t>(j)] =
                std::max(b_[static_cast<std::size_t>(j - 1)], a_[static_cast<std::size_t>(j - 1)]);
            a_[static_cast<std::size_t>(j)] = 0;
        }
        b_[static_cast<std::size_t>(i)] =
            std::max(b_[static_cast<std::size_t>(i - 1)], a_[static_cast<std::size_t>(i - 1)]);
        return out;
    }

private:
    int n_;
    std::vector<int> a_, b_;
    bool done_ = false;
};

/// Materializes the full partition list; TooLarge beyond the cap.
inline std::vector<Partition> enumerate_partitions(int n, int max_n = 12) {
    PartitionEnumerator en(n, max_n);
    std::vector<Partition> out;
    while (auto p = en.next()) out.push_back(std::move(*p));
    return out;
}

}  // namespace emergence

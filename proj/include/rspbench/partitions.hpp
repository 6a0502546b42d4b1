// partitions.hpp
// Set partitions of {0..n-1} in restricted-growth-string order, and
// non-increasing integer partitions ("composition rows") of n.

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rspbench/errors.hpp"

namespace rspbench {

/// Largest n for which exhaustive set-partition search is allowed.
inline constexpr std::size_t max_partition_elements = 14;

/// A set partition of {0..n-1}. Always stored canonically: every block is
/// sorted and blocks are ordered by their smallest element, which matches
/// the restricted growth string labelling.
class Partitioning {
public:
    Partitioning(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
        : n_(n), blocks_(std::move(blocks)) {
        std::vector<bool> seen(n_, false);
        for (auto& b : blocks_) {
            if (b.empty()) throw validation_error("partition contains an empty block");
            std::sort(b.begin(), b.end());
            for (std::size_t e : b) {
                if (e >= n_) {
                    throw validation_error("partition element " + std::to_string(e) +
                                           " out of range for n = " + std::to_string(n_));
                }
                if (seen[e]) {
                    throw validation_error("partition element " + std::to_string(e) +
                                           " appears twice");
                }
                seen[e] = true;
            }
        }
        for (std::size_t e = 0; e < n_; ++e) {
            if (!seen[e]) {
                throw validation_error("partition does not cover element " + std::to_string(e));
            }
        }
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
    }

    /// Build from a restricted growth string (labels[0] = 0, each label at
    /// most one more than the running maximum).
    static Partitioning from_rgs(const std::vector<int>& labels) {
        std::vector<std::vector<std::size_t>> blocks;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto k = static_cast<std::size_t>(labels[i]);
            if (labels[i] < 0 || k > blocks.size()) {
                throw validation_error("invalid restricted growth string");
            }
            if (k == blocks.size()) blocks.emplace_back();
            blocks[k].push_back(i);
        }
        return Partitioning(labels.size(), std::move(blocks));
    }

    static Partitioning singletons(std::size_t n) {
        std::vector<std::vector<std::size_t>> blocks(n);
        for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
        return Partitioning(n, std::move(blocks));
    }

    /// Parses "0,2|1,3" (0-based indices, blocks separated by '|').
    static Partitioning parse(const std::string& text, std::size_t n) {
        std::vector<std::vector<std::size_t>> blocks(1);
        std::string number;
        auto flush = [&] {
            if (number.empty()) return;
            std::size_t pos = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(number, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != number.size()) {
                throw validation_error("bad partition index '" + number + "'");
            }
            blocks.back().push_back(v);
            number.clear();
        };
        for (char ch : text) {
            if (ch == '|') {
                flush();
                blocks.emplace_back();
            } else if (ch == ',' || ch == ' ' || ch == '{' || ch == '}') {
                flush();
            } else {
                number.push_back(ch);
            }
        }
        flush();
        return Partitioning(n, std::move(blocks));
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

    std::vector<int> rgs() const {
        std::vector<int> labels(n_);
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            for (std::size_t e : blocks_[k]) labels[e] = static_cast<int>(k);
        return labels;
    }

    /// "{0,2}|{1,3}"
    std::string to_string() const {
        std::string out;
        for (std::size_t k = 0; k < blocks_.size(); ++k) {
            if (k) out += '|';
            out += '{';
            for (std::size_t i = 0; i < blocks_[k].size(); ++i) {
                if (i) out += ',';
                out += std::to_string(blocks_[k][i]);
            }
            out += '}';
        }
        return out;
    }

    friend bool operator==(const Partitioning&, const Partitioning&) = default;

private:
    std::size_t n_;
    std::vector<std::vector<std::size_t>> blocks_;
};

inline void require_enumerable(std::size_t n) {
    if (n > max_partition_elements) {
        throw combinatorial_error("exhaustive partition search over " + std::to_string(n) +
                                  " targets exceeds the limit of " +
                                  std::to_string(max_partition_elements));
    }
}

/// Walks restricted growth strings of length n with labels < max_blocks in
/// lexicographic order. Usage:
///
///     SetPartitionGenerator gen(n, k);
///     do { use(gen.labels()); } while (gen.next());
class SetPartitionGenerator {
public:
    SetPartitionGenerator(std::size_t n, std::size_t max_blocks)
        : labels_(n, 0), prefix_max_(n, 0), max_label_(static_cast<int>(max_blocks) - 1) {
        if (n < 1) throw validation_error("set partitions need n >= 1");
        if (max_blocks < 1) throw validation_error("set partitions need max_blocks >= 1");
        require_enumerable(n);
    }

    const std::vector<int>& labels() const noexcept { return labels_; }
    Partitioning current() const { return Partitioning::from_rgs(labels_); }

    /// Number of blocks in the current partition.
    std::size_t block_count() const noexcept {
        const std::size_t last = labels_.size() - 1;
        return static_cast<std::size_t>(std::max(prefix_max_[last], labels_[last])) + 1;
    }

    /// Advances to the next partition; false once the sequence is exhausted.
    bool next() {
        // prefix_max_[i] = max(labels_[0..i-1])
        for (std::size_t i = labels_.size(); i-- > 1;) {
            if (labels_[i] <= prefix_max_[i] && labels_[i] < max_label_) {
                ++labels_[i];
                for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                    labels_[j] = 0;
                    prefix_max_[j] = std::max(prefix_max_[j - 1], labels_[j - 1]);
                }
                return true;
            }
        }
        return false;
    }

private:
    std::vector<int> labels_;
    std::vector<int> prefix_max_;
    int max_label_;
};

/// Every partition of {0..n-1} into at most max_blocks nonempty blocks, in
/// restricted-growth-string lexicographic order.
inline std::vector<Partitioning> enumerate_set_partitions(std::size_t n, std::size_t max_blocks) {
    SetPartitionGenerator gen(n, max_blocks);
    std::vector<Partitioning> out;
    do {
        out.push_back(gen.current());
    } while (gen.next());
    return out;
}

/// Non-increasing lists of positive integers with at most max_parts parts
/// summing to n, largest leading part first: n=4 -> [4], [3,1], [2,2], ...
inline std::vector<std::vector<std::size_t>> enumerate_compositions(std::size_t n,
                                                                    std::size_t max_parts) {
    if (n < 1) throw validation_error("compositions need n >= 1");
    if (max_parts < 1) throw validation_error("compositions need max_parts >= 1");
    std::vector<std::vector<std::size_t>> rows;
    std::vector<std::size_t> row;
    auto recurse = [&](auto&& self, std::size_t remaining, std::size_t cap) -> void {
        if (remaining == 0) {
            rows.push_back(row);
            return;
        }
        if (row.size() == max_parts) return;
        for (std::size_t part = std::min(remaining, cap); part >= 1; --part) {
            row.push_back(part);
            self(self, remaining - part, part);
            row.pop_back();
        }
    };
    recurse(recurse, n, n);
    return rows;
}

} // namespace rspbench

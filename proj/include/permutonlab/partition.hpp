#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "permutonlab/errors.hpp"
#include "permutonlab/rng.hpp"

namespace permutonlab {

/// Integer partition, parts weakly decreasing and positive.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] <= 0) throw UsageError("Partition: parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw UsageError("Partition: parts must be weakly decreasing");
        }
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    int num_parts() const { return static_cast<int>(parts_.size()); }
    int part(int i) const {
        return i <= num_parts() ? parts_[static_cast<std::size_t>(i - 1)] : 0;
    }
    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    int weight() const {
        int w = 0;
        for (int p : parts_) w += p;
        return w;
    }

    Partition conjugate() const {
        std::vector<int> c;
        if (!parts_.empty()) {
            c.resize(static_cast<std::size_t>(parts_[0]));
            for (int col = 1; col <= parts_[0]; ++col) {
                int h = 0;
                for (int p : parts_) {
                    if (p >= col) ++h;
                    else break;
                }
                c[static_cast<std::size_t>(col - 1)] = h;
            }
        }
        Partition out;
        out.parts_ = std::move(c);
        return out;
    }

    /// Adds one box at the end of row r (1-based); r may be num_parts()+1.
    void add_box(int r) {
        if (r == num_parts() + 1) {
            parts_.push_back(1);
        } else if (r >= 1 && r <= num_parts() &&
                   (r == 1 || parts_[static_cast<std::size_t>(r - 2)] >
                                  parts_[static_cast<std::size_t>(r - 1)])) {
            ++parts_[static_cast<std::size_t>(r - 1)];
        } else {
            throw UsageError("Partition::add_box: row " + std::to_string(r) +
                             " not addable in " + str());
        }
    }

    void remove_box(int r) {
        if (r < 1 || r > num_parts() ||
            (r < num_parts() &&
             parts_[static_cast<std::size_t>(r - 1)] == parts_[static_cast<std::size_t>(r)]))
            throw UsageError("Partition::remove_box: row not removable");
        if (--parts_[static_cast<std::size_t>(r - 1)] == 0) parts_.pop_back();
    }

    bool operator==(const Partition& o) const = default;
    bool operator<(const Partition& o) const { return parts_ < o.parts_; }

    std::string str() const {
        if (parts_.empty()) return "-";
        std::string s;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s;
    }

private:
    std::vector<int> parts_;
};

/// 0 if equal, otherwise the row where `larger` has one box more than
/// `smaller`.  Throws if the pair is not a single-box covering.
inline int box_delta(const Partition& smaller, const Partition& larger) {
    if (smaller == larger) return 0;
    const auto& a = smaller.parts();
    const auto& b = larger.parts();
    if (b.size() != a.size() && b.size() != a.size() + 1)
        throw ReconstructionFailure("labels differ by more than one box");
    int row = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        int av = i < a.size() ? a[i] : 0;
        if (b[i] == av + 1) {
            if (row) throw ReconstructionFailure("labels differ in two rows");
            row = static_cast<int>(i) + 1;
        } else if (b[i] != av) {
            throw ReconstructionFailure("labels differ by more than one box");
        }
    }
    if (!row) throw ReconstructionFailure("labels differ by more than one box");
    return row;
}

inline BigInt factorial_big(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Number of standard Young tableaux of the given shape (hook length formula).
inline BigInt hook_count(const Partition& lambda) {
    if (lambda.empty()) return BigInt(1);
    const auto& parts = lambda.parts();
    Partition conj = lambda.conjugate();
    BigInt denom = 1;
    for (int r = 1; r <= lambda.num_parts(); ++r) {
        for (int c = 1; c <= parts[static_cast<std::size_t>(r - 1)]; ++c) {
            int arm = parts[static_cast<std::size_t>(r - 1)] - c;
            int leg = conj.part(c) - r;
            denom *= arm + leg + 1;
        }
    }
    return factorial_big(lambda.weight()) / denom;
}

/// All partitions of n with every part <= max_part, in lexicographically
/// increasing order of the part vector.
template <typename Visitor>
void for_each_partition_max_part(int n, int max_part, Visitor&& visit) {
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            visit(Partition(std::vector<int>(parts)));
            return;
        }
        for (int p = std::min(remaining, cap); p >= 1; --p) {
            parts.push_back(p);
            rec(remaining - p, p);
            parts.pop_back();
        }
    };
    if (n == 0) {
        visit(Partition());
        return;
    }
    if (n < 0 || max_part < 0) throw UsageError("for_each_partition_max_part: bad input");
    rec(n, max_part);
}

} // namespace permutonlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permutonlab/errors.hpp"
#include "permutonlab/permutation.hpp"

namespace permutonlab {

/// Ferrers shape in French convention: row_lengths[j-1] is the length of
/// row j, rows counted from the bottom, weakly decreasing.  Box (i, j)
/// (column i, row j, both 1-based) belongs to the shape iff i <= row j's
/// length.  The region is closed to the southwest.
class FerrersShape {
public:
    FerrersShape() = default;

    explicit FerrersShape(std::vector<int> row_lengths) : rows_(std::move(row_lengths)) {
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            if (rows_[j] <= 0) throw UsageError("FerrersShape: row lengths must be positive");
            if (j > 0 && rows_[j] > rows_[j - 1])
                throw UsageError("FerrersShape: row lengths must be weakly decreasing bottom-up");
        }
    }

    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_cols() const { return rows_.empty() ? 0 : rows_[0]; }
    int row_length(int j) const { return rows_[static_cast<std::size_t>(j - 1)]; }
    const std::vector<int>& row_lengths() const { return rows_; }

    std::int64_t boxes() const {
        std::int64_t b = 0;
        for (int r : rows_) b += r;
        return b;
    }

    bool box_in(int col, int row) const {
        return row >= 1 && row <= num_rows() && col >= 1 && col <= row_length(row);
    }

    /// A traversal needs as many rows as columns and room for a system of
    /// distinct column representatives, i.e. the staircase inside the shape.
    bool admits_traversal() const {
        if (rows_.empty()) return true;
        int r = num_rows();
        if (num_cols() != r) return false;
        for (int j = 1; j <= r; ++j)
            if (row_length(j) < r + 1 - j) return false;
        return true;
    }

    bool operator==(const FerrersShape& o) const = default;
    bool operator<(const FerrersShape& o) const { return rows_ < o.rows_; }

    /// Comma-separated row lengths bottom-up, e.g. "7,7,5,5,5,4,4".
    std::string str() const {
        std::string s;
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            if (j) s += ',';
            s += std::to_string(rows_[j]);
        }
        return s;
    }

    static FerrersShape parse(std::string_view text) {
        std::vector<int> v;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t next = text.find(',', pos);
            if (next == std::string_view::npos) next = text.size();
            v.push_back(std::stoi(std::string(text.substr(pos, next - pos))));
            pos = next + 1;
        }
        return FerrersShape(std::move(v));
    }

private:
    std::vector<int> rows_;
};

/// A 0/1 filling of a Ferrers shape with exactly one 1 in every row and
/// every column.  row_col[j-1] is the column of row j's unique 1.
class Traversal {
public:
    Traversal() = default;

    Traversal(FerrersShape shape, std::vector<int> row_col)
        : shape_(std::move(shape)), row_col_(std::move(row_col)) {
        int r = shape_.num_rows();
        if (static_cast<int>(row_col_.size()) != r)
            throw NotATraversal("traversal: one column index per row required");
        if (!shape_.admits_traversal())
            throw NotATraversal("traversal: shape " + shape_.str() + " admits no traversal");
        std::vector<char> used(static_cast<std::size_t>(shape_.num_cols()) + 1, 0);
        for (int j = 1; j <= r; ++j) {
            int c = col_of_row(j);
            if (c < 1 || c > shape_.row_length(j))
                throw NotATraversal("traversal: point outside shape");
            if (used[static_cast<std::size_t>(c)])
                throw NotATraversal("traversal: duplicate column");
            used[static_cast<std::size_t>(c)] = 1;
        }
    }

    /// The square traversal of a permutation: column i holds its 1 in
    /// row sigma(i).
    static Traversal square(const Permutation& sigma) {
        int n = sigma.size();
        std::vector<int> rows(static_cast<std::size_t>(n), n);
        std::vector<int> rc(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) rc[static_cast<std::size_t>(sigma(i) - 1)] = i;
        return Traversal(FerrersShape(std::move(rows)), std::move(rc));
    }

    const FerrersShape& shape() const { return shape_; }
    int size() const { return shape_.num_rows(); }
    int col_of_row(int j) const { return row_col_[static_cast<std::size_t>(j - 1)]; }
    const std::vector<int>& row_cols() const { return row_col_; }

    /// The word (col_of_row(1), ..., col_of_row(r)) as a permutation.
    Permutation word() const { return Permutation(std::vector<int>(row_col_)); }

    /// The column word: row_of_col(1), ..., row_of_col(r).
    Permutation column_word() const { return inverse(word()); }

    bool operator==(const Traversal& o) const = default;
    bool operator<(const Traversal& o) const {
        return shape_ < o.shape_ || (shape_ == o.shape_ && row_col_ < o.row_col_);
    }

    /// "shape;cols", e.g. "2,2;2,1".
    std::string str() const {
        std::string s = shape_.str();
        s += ';';
        for (std::size_t j = 0; j < row_col_.size(); ++j) {
            if (j) s += ',';
            s += std::to_string(row_col_[j]);
        }
        return s;
    }

    static Traversal parse(std::string_view text) {
        auto sep = text.find(';');
        if (sep == std::string_view::npos) throw UsageError("traversal: missing ';'");
        FerrersShape sh = FerrersShape::parse(text.substr(0, sep));
        std::vector<int> rc;
        std::string_view rest = text.substr(sep + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(',', pos);
            if (next == std::string_view::npos) next = rest.size();
            rc.push_back(std::stoi(std::string(rest.substr(pos, next - pos))));
            pos = next + 1;
        }
        return Traversal(std::move(sh), std::move(rc));
    }

private:
    FerrersShape shape_;
    std::vector<int> row_col_;
};

/// Pattern containment for traversals: a copy of sigma, read off the
/// column word left to right, counts only when the m x m rectangle spanned
/// by its rows and columns lies inside the shape.  By southwest-closedness
/// this reduces to the box at the maximal column and maximal row.
inline bool traversal_contains(const Traversal& L, const Permutation& sigma) {
    int m = sigma.size();
    int r = L.size();
    if (m > r) return false;
    if (m == 0) return true;

    std::vector<int> colword(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j)
        colword[static_cast<std::size_t>(L.col_of_row(j) - 1)] = j;

    // DFS over columns in increasing order, matching sigma's relative order
    // on the rows.
    std::vector<int> chosen(static_cast<std::size_t>(m));
    std::function<bool(int, int)> rec = [&](int k, int startCol) -> bool {
        if (k == m) return true;
        int lo = 0, hi = r + 1;
        for (int j = 0; j < k; ++j) {
            if (sigma(j + 1) < sigma(k + 1))
                lo = std::max(lo, chosen[static_cast<std::size_t>(j)]);
            else
                hi = std::min(hi, chosen[static_cast<std::size_t>(j)]);
        }
        for (int col = startCol; col <= r - (m - k - 1); ++col) {
            int row = colword[static_cast<std::size_t>(col - 1)];
            if (row <= lo || row >= hi) continue;
            if (k + 1 == m) {
                int maxr = row;
                for (int j = 0; j < k; ++j)
                    maxr = std::max(maxr, chosen[static_cast<std::size_t>(j)]);
                if (!L.shape().box_in(col, maxr)) continue;
            }
            chosen[static_cast<std::size_t>(k)] = row;
            if (rec(k + 1, col + 1)) return true;
        }
        return false;
    };
    return rec(0, 1);
}

inline bool traversal_avoids(const Traversal& L, const Permutation& sigma) {
    return !traversal_contains(L, sigma);
}

inline constexpr int kDefaultTraversalBound = 16;

/// Visits each traversal of the shape exactly once, lexicographic by the
/// row-column word.
template <typename Visitor>
void for_each_traversal(const FerrersShape& shape, Visitor&& visit,
                        int bound = kDefaultTraversalBound) {
    if (shape.boxes() > bound)
        throw BoundExceeded("enumerate_traversals: shape has " +
                            std::to_string(shape.boxes()) + " boxes, bound " +
                            std::to_string(bound));
    if (!shape.admits_traversal()) return;
    int r = shape.num_rows();
    std::vector<int> rc(static_cast<std::size_t>(r));
    std::vector<char> used(static_cast<std::size_t>(r) + 1, 0);
    std::function<void(int)> rec = [&](int row) {
        if (row > r) {
            visit(Traversal(shape, rc));
            return;
        }
        for (int c = 1; c <= shape.row_length(row); ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            used[static_cast<std::size_t>(c)] = 1;
            rc[static_cast<std::size_t>(row - 1)] = c;
            rec(row + 1);
            used[static_cast<std::size_t>(c)] = 0;
        }
    };
    rec(1);
}

inline std::vector<Traversal> enumerate_traversals(const FerrersShape& shape,
                                                   int bound = kDefaultTraversalBound) {
    std::vector<Traversal> out;
    for_each_traversal(shape, [&](Traversal t) { out.push_back(std::move(t)); }, bound);
    return out;
}

inline std::vector<Traversal> enumerate_avoiding_traversals(
    const FerrersShape& shape, const Permutation& sigma,
    int bound = kDefaultTraversalBound) {
    std::vector<Traversal> out;
    for_each_traversal(shape, [&](Traversal t) {
        if (traversal_avoids(t, sigma)) out.push_back(std::move(t));
    }, bound);
    return out;
}

inline std::uint64_t count_avoiding_traversals(const FerrersShape& shape,
                                               const Permutation& sigma,
                                               int bound = kDefaultTraversalBound) {
    std::uint64_t c = 0;
    for_each_traversal(shape, [&](const Traversal& t) {
        if (traversal_avoids(t, sigma)) ++c;
    }, bound);
    return c;
}

/// All Ferrers shapes with the given number of boxes (partitions of n).
inline std::vector<FerrersShape> shapes_with_boxes(int boxes) {
    std::vector<FerrersShape> out;
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int remaining, int maxPart) {
        if (remaining == 0) {
            out.emplace_back(parts); // already weakly decreasing
            return;
        }
        for (int p = std::min(remaining, maxPart); p >= 1; --p) {
            parts.push_back(p);
            rec(remaining - p, p);
            parts.pop_back();
        }
    };
    if (boxes == 0) {
        out.emplace_back();
        return out;
    }
    rec(boxes, boxes);
    return out;
}

struct ShapeWilfReport {
    bool equal_everywhere = true;
    int shapes_tested = 0;          // traversable shapes compared
    int shapes_skipped = 0;         // shapes admitting no traversal (trivially equal)
    FerrersShape counterexample;    // first shape with differing counts, if any
    std::uint64_t count_first = 0;  // |S_lambda(sigma)| at the counterexample
    std::uint64_t count_second = 0; // |S_lambda(sigma')| at the counterexample
};

inline constexpr int kShapeWilfMaxBoxesCap = 16;

/// Compares |S_lambda(sigma)| and |S_lambda(sigma')| over every Ferrers
/// shape with at most max_boxes boxes.  Shapes without traversals are
/// counted as trivially equal.  The cap can be lifted explicitly for
/// larger experiments.
inline ShapeWilfReport shape_wilf_check(const Permutation& sigma, const Permutation& sigmap,
                                        int max_boxes, bool lift_cap = false) {
    if (!lift_cap && max_boxes > kShapeWilfMaxBoxesCap)
        throw BoundExceeded("shape_wilf_check: max_boxes > " +
                            std::to_string(kShapeWilfMaxBoxesCap));
    if (!lift_cap && (sigma.size() > 4 || sigmap.size() > 4))
        throw BoundExceeded("shape_wilf_check: patterns of size <= 4 only");
    ShapeWilfReport rep;
    for (int b = 1; b <= max_boxes; ++b) {
        for (const auto& sh : shapes_with_boxes(b)) {
            if (!sh.admits_traversal()) {
                ++rep.shapes_skipped;
                continue;
            }
            int tb = static_cast<int>(sh.boxes());
            std::uint64_t c1 = count_avoiding_traversals(sh, sigma, tb);
            std::uint64_t c2 = count_avoiding_traversals(sh, sigmap, tb);
            ++rep.shapes_tested;
            if (c1 != c2) {
                rep.equal_everywhere = false;
                rep.counterexample = sh;
                rep.count_first = c1;
                rep.count_second = c2;
                return rep;
            }
        }
    }
    return rep;
}

} // namespace permutonlab

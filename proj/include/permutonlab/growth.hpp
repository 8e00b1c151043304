#pragma once

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

#include "permutonlab/errors.hpp"
#include "permutonlab/partition.hpp"
#include "permutonlab/permutation.hpp"
#include "permutonlab/rng.hpp"
#include "permutonlab/shape.hpp"

namespace permutonlab {

// ---------------------------------------------------------------------------
// Standard Young tableaux and RSK
// ---------------------------------------------------------------------------

class StandardTableau {
public:
    StandardTableau() = default;

    explicit StandardTableau(std::vector<std::vector<int>> rows) : rows_(std::move(rows)) {
        validate();
    }

    int size() const {
        int n = 0;
        for (const auto& r : rows_) n += static_cast<int>(r.size());
        return n;
    }

    Partition shape() const {
        std::vector<int> p;
        p.reserve(rows_.size());
        for (const auto& r : rows_) p.push_back(static_cast<int>(r.size()));
        return Partition(std::move(p));
    }

    int num_rows() const { return static_cast<int>(rows_.size()); }
    const std::vector<int>& row(int r) const { return rows_[static_cast<std::size_t>(r - 1)]; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }

    bool operator==(const StandardTableau& o) const = default;

private:
    void validate() const {
        int n = size();
        std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (r > 0 && rows_[r].size() > rows_[r - 1].size())
                throw UsageError("tableau: row lengths must weakly decrease");
            for (std::size_t c = 0; c < rows_[r].size(); ++c) {
                int v = rows_[r][c];
                if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
                    throw UsageError("tableau: entries must be a bijection onto [n]");
                seen[static_cast<std::size_t>(v)] = 1;
                if (c > 0 && rows_[r][c - 1] >= v)
                    throw UsageError("tableau: rows must strictly increase");
                if (r > 0 && rows_[r - 1][c] >= v)
                    throw UsageError("tableau: columns must strictly increase");
            }
        }
    }

    std::vector<std::vector<int>> rows_;
};

struct RskPair {
    StandardTableau p;
    StandardTableau q;
};

/// Row-insertion Robinson-Schensted correspondence.
inline RskPair rsk(const Permutation& sigma) {
    std::vector<std::vector<int>> p, q;
    for (int i = 1; i <= sigma.size(); ++i) {
        int x = sigma(i);
        std::size_t r = 0;
        for (;; ++r) {
            if (r == p.size()) {
                p.emplace_back();
                q.emplace_back();
            }
            auto& row = p[r];
            auto it = std::upper_bound(row.begin(), row.end(), x);
            if (it == row.end()) {
                row.push_back(x);
                q[r].push_back(i);
                break;
            }
            std::swap(*it, x);
        }
    }
    return {StandardTableau(std::move(p)), StandardTableau(std::move(q))};
}

/// Inverse of rsk.  P and Q must have the same shape.
inline Permutation inverse_rsk(const StandardTableau& P, const StandardTableau& Q) {
    if (P.shape() != Q.shape()) throw ShapeMismatch("inverse_rsk: P and Q shapes differ");
    int n = P.size();
    auto p = P.rows();

    // Row of each entry of Q; within its row an entry is removed exactly
    // when it is the current last cell.
    std::vector<int> qrow(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 1; r <= Q.num_rows(); ++r)
        for (int v : Q.row(r)) qrow[static_cast<std::size_t>(v)] = r;

    std::vector<int> out(static_cast<std::size_t>(n));
    for (int m = n; m >= 1; --m) {
        int r = qrow[static_cast<std::size_t>(m)];
        auto& row = p[static_cast<std::size_t>(r - 1)];
        int x = row.back();
        row.pop_back();
        for (int rr = r - 1; rr >= 1; --rr) {
            auto& up = p[static_cast<std::size_t>(rr - 1)];
            auto it = std::lower_bound(up.begin(), up.end(), x);
            // the bumped entry is the rightmost one smaller than x
            --it;
            std::swap(*it, x);
        }
        out[static_cast<std::size_t>(m - 1)] = x;
    }
    return Permutation(std::move(out));
}

/// Uniformly random standard tableau of the given shape (hook walk).
inline StandardTableau hook_walk_sample(const Partition& lambda, SeededRng& rng) {
    std::vector<int> parts = lambda.parts();
    int total = lambda.weight();
    std::vector<std::vector<int>> rows(parts.size());
    for (std::size_t r = 0; r < parts.size(); ++r)
        rows[r].assign(static_cast<std::size_t>(parts[r]), 0);

    for (int m = total; m >= 1; --m) {
        while (!parts.empty() && parts.back() == 0) parts.pop_back();
        int cells = 0;
        for (int p : parts) cells += p;
        // uniform starting cell
        std::int64_t t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cells)));
        int r = 1, c = 1;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (t < parts[i]) {
                r = static_cast<int>(i) + 1;
                c = static_cast<int>(t) + 1;
                break;
            }
            t -= parts[i];
        }
        // walk within the hook until a corner is reached
        for (;;) {
            int arm = parts[static_cast<std::size_t>(r - 1)] - c;
            int leg = 0;
            for (std::size_t i = static_cast<std::size_t>(r); i < parts.size() && parts[i] >= c; ++i)
                ++leg;
            if (arm + leg == 0) break;
            std::uint64_t k = rng.below(static_cast<std::uint64_t>(arm + leg));
            if (k < static_cast<std::uint64_t>(arm))
                c += static_cast<int>(k) + 1;
            else
                r += static_cast<int>(k - static_cast<std::uint64_t>(arm)) + 1;
        }
        rows[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c - 1)] = m;
        --parts[static_cast<std::size_t>(r - 1)];
    }
    return StandardTableau(std::move(rows));
}

// ---------------------------------------------------------------------------
// Growth diagrams on Ferrers shapes
// ---------------------------------------------------------------------------

/// Corner labels along the northeast boundary path of a shape, from the
/// top-left path end (0, rows) to the bottom-right end (cols, 0).
/// Consecutive labels differ by at most one box; both ends are empty.
struct GrowthBorder {
    std::vector<std::pair<int, int>> path; // (col, row) lattice corners
    std::vector<Partition> labels;
};

namespace detail {

// Local growth rule in box-delta form.  a = delta(SW -> NW) on the left
// edge, b = delta(SW -> SE) on the bottom edge, m = cell content.
// Returns {top edge delta(NW -> NE), right edge delta(SE -> NE)}.
inline std::pair<int, int> growth_forward_rule(int a, int b, bool m) {
    if (m) {
        if (a != 0 || b != 0)
            throw ReconstructionFailure("growth: filled cell with nonequal corner labels");
        return {1, 1};
    }
    if (a == b) {
        if (a == 0) return {0, 0};
        return {a + 1, a + 1};
    }
    return {b, a};
}

// Inverse rule: from the top edge delta h and right edge delta v recover
// the cell content and the bottom/left edge deltas {m, a(left), b(bottom)}.
struct InverseStep {
    bool m;
    int a;
    int b;
};

inline InverseStep growth_inverse_rule(int h, int v) {
    if (h == v) {
        if (h == 0) return {false, 0, 0};
        if (h == 1) return {true, 0, 0};
        return {false, h - 1, h - 1};
    }
    return {false, v, h};
}

} // namespace detail

/// Runs the RSK local rules over every cell of the shape (row-major, a cell
/// after its south and west neighbours) and reports the labels along the
/// northeast border.  Interior labels are never materialized; only the
/// box-deltas between neighbouring corners are propagated, which keeps the
/// sweep at O(1) per cell.
inline GrowthBorder forward_growth(const Traversal& T) {
    const FerrersShape& sh = T.shape();
    int r = sh.num_rows();
    GrowthBorder gb;
    if (r == 0) {
        gb.path.emplace_back(0, 0);
        gb.labels.emplace_back();
        return gb;
    }
    int cols = sh.num_cols();
    std::vector<int> hd(static_cast<std::size_t>(cols) + 1, 0);

    // Collected bottom-up; reassembled in path order afterwards.
    std::vector<std::vector<Partition>> segs(static_cast<std::size_t>(r) + 1);

    for (int j = 1; j <= r; ++j) {
        int len = sh.row_length(j);
        int above = j < r ? sh.row_length(j + 1) : 0;
        int vd = 0;
        Partition running;
        if (above == 0) segs[static_cast<std::size_t>(j)].push_back(running);
        for (int i = 1; i <= len; ++i) {
            bool m = T.col_of_row(j) == i;
            auto [dh, dv] = detail::growth_forward_rule(vd, hd[static_cast<std::size_t>(i)], m);
            hd[static_cast<std::size_t>(i)] = dh;
            vd = dv;
            if (dh) running.add_box(dh);
            if (i >= above) segs[static_cast<std::size_t>(j)].push_back(running);
        }
    }

    for (int j = r; j >= 1; --j) {
        int above = j < r ? sh.row_length(j + 1) : 0;
        for (std::size_t k = 0; k < segs[static_cast<std::size_t>(j)].size(); ++k) {
            gb.path.emplace_back(above + static_cast<int>(k), j);
            gb.labels.push_back(std::move(segs[static_cast<std::size_t>(j)][k]));
        }
    }
    gb.path.emplace_back(cols, 0);
    gb.labels.emplace_back();
    return gb;
}

/// Rebuilds the unique traversal whose forward growth produces the given
/// border labels.  Throws ReconstructionFailure on an inconsistent label
/// sequence.
inline Traversal inverse_growth(const FerrersShape& sh, const std::vector<Partition>& labels) {
    int r = sh.num_rows();
    if (r == 0) {
        if (labels.size() != 1 || !labels[0].empty())
            throw ReconstructionFailure("inverse growth: bad empty-shape border");
        return Traversal(sh, {});
    }
    int cols = sh.num_cols();
    // Path order: row segments j = r..1 (corner columns above..row length),
    // then the terminal corner (cols, 0).
    std::vector<std::size_t> segStart(static_cast<std::size_t>(r) + 2, 0);
    {
        std::size_t idx = 0;
        for (int j = r; j >= 1; --j) {
            segStart[static_cast<std::size_t>(j)] = idx;
            int above = j < r ? sh.row_length(j + 1) : 0;
            idx += static_cast<std::size_t>(sh.row_length(j) - above) + 1;
        }
        segStart[0] = idx;
        if (labels.size() != idx + 1)
            throw ReconstructionFailure("inverse growth: border label count mismatch");
    }
    auto label_at = [&](int i, int j) -> const Partition& {
        if (j == 0) return labels[segStart[0]];
        int above = j < r ? sh.row_length(j + 1) : 0; // column of the segment's first corner
        return labels[segStart[static_cast<std::size_t>(j)] + static_cast<std::size_t>(i - above)];
    };

    std::vector<int> hTop(static_cast<std::size_t>(cols) + 1, 0);
    std::vector<int> row_cols(static_cast<std::size_t>(r), 0);

    for (int j = r; j >= 1; --j) {
        int len = sh.row_length(j);
        int above = j < r ? sh.row_length(j + 1) : 0;
        for (int i = above + 1; i <= len; ++i)
            hTop[static_cast<std::size_t>(i)] = box_delta(label_at(i - 1, j), label_at(i, j));
        int v = box_delta(label_at(len, j - 1), label_at(len, j));
        for (int i = len; i >= 1; --i) {
            auto step = detail::growth_inverse_rule(hTop[static_cast<std::size_t>(i)], v);
            if (step.m) {
                if (row_cols[static_cast<std::size_t>(j - 1)] != 0)
                    throw ReconstructionFailure("inverse growth: two cells filled in one row");
                row_cols[static_cast<std::size_t>(j - 1)] = i;
            }
            hTop[static_cast<std::size_t>(i)] = step.b;
            v = step.a;
        }
        if (v != 0)
            throw ReconstructionFailure("inverse growth: leftover delta at row start");
        if (row_cols[static_cast<std::size_t>(j - 1)] == 0)
            throw ReconstructionFailure("inverse growth: empty row");
    }
    try {
        return Traversal(sh, std::move(row_cols));
    } catch (const NotATraversal& e) {
        throw ReconstructionFailure(std::string("inverse growth: ") + e.what());
    }
}

/// Shape-preserving involution on traversals realized by conjugating every
/// border label of the growth diagram and rebuilding the filling.  Restricts
/// to a bijection between the I_k-avoiding and J_k-avoiding traversals of
/// the shape for every k.
inline Traversal border_conjugate_bijection(const Traversal& T) {
    GrowthBorder gb = forward_growth(T);
    std::vector<Partition> conj;
    conj.reserve(gb.labels.size());
    for (const auto& l : gb.labels) conj.push_back(l.conjugate());
    return inverse_growth(T.shape(), conj);
}

} // namespace permutonlab

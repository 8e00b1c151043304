#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "permutonlab/errors.hpp"

namespace permutonlab {

/// A permutation of {1,...,n} in one-line notation.  n = 0 (the empty
/// permutation) is a valid value and avoids every nonempty pattern.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> one_line) : vals_(std::move(one_line)) {
        validate();
    }

    Permutation(std::initializer_list<int> one_line) : vals_(one_line) { validate(); }

    int size() const { return static_cast<int>(vals_.size()); }
    bool empty() const { return vals_.empty(); }

    /// 1-based evaluation: sigma(i) for i in [1, n].
    int operator()(int i) const { return vals_[static_cast<std::size_t>(i - 1)]; }

    const std::vector<int>& one_line() const { return vals_; }

    bool operator==(const Permutation& o) const = default;
    bool operator<(const Permutation& o) const { return vals_ < o.vals_; }

    /// Comma-separated 1-based one-line notation, e.g. "3,1,4,2".
    std::string str() const {
        std::string s;
        for (int i = 0; i < size(); ++i) {
            if (i) s += ',';
            s += std::to_string(vals_[i]);
        }
        return s;
    }

    /// Parses "3,1,4,2".  A comma-free digit string like "312" is accepted
    /// as shorthand for single-digit entries.
    static Permutation parse(std::string_view text) {
        std::vector<int> v;
        if (text.find(',') == std::string_view::npos) {
            for (char c : text) {
                if (c == ' ') continue;
                if (c < '1' || c > '9')
                    throw UsageError("cannot parse permutation: " + std::string(text));
                v.push_back(c - '0');
            }
        } else {
            std::string s(text);
            std::istringstream in(s);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                try {
                    v.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    throw UsageError("cannot parse permutation: " + s);
                }
            }
        }
        return Permutation(std::move(v));
    }

private:
    void validate() const {
        int n = size();
        std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
        for (int v : vals_) {
            if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
                throw UsageError("not a permutation of {1..n}: " + str());
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }

    std::vector<int> vals_;
};

enum class Direction { increasing, decreasing };

/// I_k (1..k) or J_k (k..1); k = 0 gives the empty permutation.
inline Permutation monotone(int k, Direction dir) {
    std::vector<int> v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        v[static_cast<std::size_t>(i)] = dir == Direction::increasing ? i + 1 : k - i;
    return Permutation(std::move(v));
}

inline Permutation increasing_pattern(int k) { return monotone(k, Direction::increasing); }
inline Permutation decreasing_pattern(int k) { return monotone(k, Direction::decreasing); }

inline Permutation reverse(const Permutation& s) {
    int n = s.size();
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = s(n + 1 - i);
    return Permutation(std::move(v));
}

inline Permutation complement(const Permutation& s) {
    int n = s.size();
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = n + 1 - s(i);
    return Permutation(std::move(v));
}

inline Permutation reverse_complement(const Permutation& s) {
    int n = s.size();
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = n + 1 - s(n + 1 - i);
    return Permutation(std::move(v));
}

inline Permutation inverse(const Permutation& s) {
    int n = s.size();
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(s(i) - 1)] = i;
    return Permutation(std::move(v));
}

inline Permutation direct_sum(const Permutation& a, const Permutation& b) {
    std::vector<int> v;
    v.reserve(static_cast<std::size_t>(a.size() + b.size()));
    for (int x : a.one_line()) v.push_back(x);
    for (int x : b.one_line()) v.push_back(x + a.size());
    return Permutation(std::move(v));
}

inline Permutation skew_sum(const Permutation& a, const Permutation& b) {
    std::vector<int> v;
    v.reserve(static_cast<std::size_t>(a.size() + b.size()));
    for (int x : a.one_line()) v.push_back(x + b.size());
    for (int x : b.one_line()) v.push_back(x);
    return Permutation(std::move(v));
}

/// Longest increasing subsequence length, by patience sorting.
inline int lis(const Permutation& s) {
    std::vector<int> tails; // tails[k] = smallest tail of an increasing run of length k+1
    for (int x : s.one_line()) {
        auto it = std::lower_bound(tails.begin(), tails.end(), x);
        if (it == tails.end())
            tails.push_back(x);
        else
            *it = x;
    }
    return static_cast<int>(tails.size());
}

inline int lds(const Permutation& s) { return lis(complement(s)); }

// ---------------------------------------------------------------------------
// Pattern containment
// ---------------------------------------------------------------------------

namespace detail {

// Depth-first embedding search.  chosen[k] is the sigma-value matched to
// pattern position k; each extension is constrained to the open value
// interval dictated by the pattern entries already placed.
inline bool contains_dfs(const std::vector<int>& sv, const std::vector<int>& pv,
                         std::vector<int>& chosen, int k, int start) {
    int n = static_cast<int>(sv.size());
    int m = static_cast<int>(pv.size());
    if (k == m) return true;
    int lo = 0, hi = n + 1;
    for (int j = 0; j < k; ++j) {
        if (pv[static_cast<std::size_t>(j)] < pv[static_cast<std::size_t>(k)])
            lo = std::max(lo, chosen[static_cast<std::size_t>(j)]);
        else
            hi = std::min(hi, chosen[static_cast<std::size_t>(j)]);
    }
    for (int i = start; i <= n - (m - k); ++i) {
        int v = sv[static_cast<std::size_t>(i)];
        if (v > lo && v < hi) {
            chosen[static_cast<std::size_t>(k)] = v;
            if (contains_dfs(sv, pv, chosen, k + 1, i + 1)) return true;
        }
    }
    return false;
}

} // namespace detail

/// Whether sigma contains a copy of the pattern pi.
inline bool contains(const Permutation& sigma, const Permutation& pi) {
    if (pi.size() > sigma.size()) return false;
    if (pi.empty()) return true;
    std::vector<int> chosen(static_cast<std::size_t>(pi.size()));
    return detail::contains_dfs(sigma.one_line(), pi.one_line(), chosen, 0, 0);
}

/// A minimal antichain of patterns.  Construction drops any pattern that
/// contains another pattern of the set; the avoidance class is unchanged.
class PatternSet {
public:
    explicit PatternSet(std::vector<Permutation> patterns) {
        if (patterns.empty()) throw UsageError("PatternSet: empty pattern list");
        for (const auto& p : patterns)
            if (p.empty()) throw UsageError("PatternSet: patterns must have size >= 1");
        std::sort(patterns.begin(), patterns.end(),
                  [](const Permutation& a, const Permutation& b) {
                      return a.size() < b.size() || (a.size() == b.size() && a < b);
                  });
        patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
        for (const auto& p : patterns) {
            bool redundant = false;
            for (const auto& q : pats_)
                if (q.size() < p.size() && contains(p, q)) { redundant = true; break; }
            if (!redundant) pats_.push_back(p);
        }
    }

    PatternSet(std::initializer_list<Permutation> patterns)
        : PatternSet(std::vector<Permutation>(patterns)) {}

    const std::vector<Permutation>& patterns() const { return pats_; }

private:
    std::vector<Permutation> pats_;
};

inline bool avoids(const Permutation& sigma, const PatternSet& ps) {
    for (const auto& p : ps.patterns())
        if (contains(sigma, p)) return false;
    return true;
}

inline bool avoids(const Permutation& sigma, const Permutation& p) {
    return !contains(sigma, p);
}

// ---------------------------------------------------------------------------
// Class specs and monotone-block patterns
// ---------------------------------------------------------------------------

/// Parameters (k1, k2, k3) of the family Av(J_k1 + I_k2 + J_k3) of target
/// classes; d + 1 = k1 + k2 + k3 is the forbidden increasing length for
/// the source class Av(I_{d+1}).
struct ClassSpec {
    int k1 = 1;
    int k2 = 0;
    int k3 = 1;

    ClassSpec() = default;
    ClassSpec(int a, int b, int c) : k1(a), k2(b), k3(c) {
        if (k1 < 1 || k3 < 1 || k2 < 0 || k1 + k2 + k3 < 2)
            throw UsageError("ClassSpec: need k1 >= 1, k3 >= 1, k2 >= 0, k1+k2+k3 >= 2");
    }

    int d() const { return k1 + k2 + k3 - 1; }

    std::string str() const {
        return std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k3);
    }
};

/// One monotone run of a direct sum of monotone patterns.
struct MonotoneBlock {
    Direction dir;
    int len;
};

inline Permutation block_pattern(const std::vector<MonotoneBlock>& blocks) {
    Permutation p;
    for (const auto& b : blocks) p = direct_sum(p, monotone(b.len, b.dir));
    return p;
}

/// J_{k1} + I_{k2} + J_{k3}.
inline Permutation class_pattern(const ClassSpec& spec) {
    return block_pattern({{Direction::decreasing, spec.k1},
                          {Direction::increasing, spec.k2},
                          {Direction::decreasing, spec.k3}});
}

namespace detail {

// Fenwick tree over values 1..n for prefix maxima.
class PrefixMax {
public:
    explicit PrefixMax(int n) : n_(n), t_(static_cast<std::size_t>(n) + 1, kNone) {}
    static constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();

    void update(int pos, std::int64_t v) {
        for (; pos <= n_; pos += pos & -pos)
            t_[static_cast<std::size_t>(pos)] = std::max(t_[static_cast<std::size_t>(pos)], v);
    }
    // max over positions [1, pos]
    std::int64_t query(int pos) const {
        std::int64_t r = kNone;
        for (; pos > 0; pos -= pos & -pos)
            r = std::max(r, t_[static_cast<std::size_t>(pos)]);
        return r;
    }

private:
    int n_;
    std::vector<std::int64_t> t_;
};

} // namespace detail

namespace detail {

/// Fast containment for patterns of the form J_a + I_b + J_c (any part may
/// be empty).  One right-to-left sweep with O(log n) work per point:
///  - trailing decreasing chains carry their minimum value, indexed by start
///    value in a Fenwick tree, so "a full J_c strictly northeast of e" is a
///    comparison against the best chain minimum;
///  - the middle increasing run chains through running maxima of feasible
///    start values (its start is the whole suffix's minimum);
///  - the leading decreasing run carries, per chain, the best feasible
///    continuation value past its right end, compared against the chain's
///    start at the top.
inline bool contains_dec_inc_dec(const Permutation& sigma, int a, int b, int c) {
    int n = sigma.size();
    if (a + b + c > n) return false;
    if (a + b + c == 0) return true;
    constexpr std::int64_t kNone = PrefixMax::kNone;
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

    std::vector<PrefixMax> fwZ(static_cast<std::size_t>(c) + 1, PrefixMax(n)); // start -> max min
    std::vector<std::int64_t> gmZ(static_cast<std::size_t>(c) + 1, kNone);
    std::vector<std::int64_t> mxY(static_cast<std::size_t>(b) + 1, kNone);
    std::vector<PrefixMax> fwX(static_cast<std::size_t>(a) + 1, PrefixMax(n)); // value -> max K
    std::vector<std::int64_t> newmin(static_cast<std::size_t>(c) + 1, kNone);
    std::vector<char> feasY(static_cast<std::size_t>(b) + 1, 0);
    std::vector<std::int64_t> K(static_cast<std::size_t>(a) + 1, kNone);

    for (int i = n; i >= 1; --i) {
        std::int64_t v = sigma(i);
        // ---- query phase (structures hold points strictly right of i) ----
        if (b >= 1) {
            feasY[1] = (c == 0) || gmZ[static_cast<std::size_t>(c)] > v;
            for (int l = 2; l <= b; ++l)
                feasY[static_cast<std::size_t>(l)] = mxY[static_cast<std::size_t>(l - 1)] > v;
        }
        if (a >= 1) {
            K[1] = b >= 1 ? mxY[static_cast<std::size_t>(b)]
                          : (c >= 1 ? kNone : kInf); // post-merge b==0 implies a+c only
            for (int l = 2; l <= a; ++l)
                K[static_cast<std::size_t>(l)] =
                    v > 1 ? fwX[static_cast<std::size_t>(l - 1)].query(static_cast<int>(v) - 1)
                          : kNone;
            if (K[static_cast<std::size_t>(a)] != kNone && K[static_cast<std::size_t>(a)] > v)
                return true;
        } else if (b >= 1) {
            if (feasY[static_cast<std::size_t>(b)]) return true;
        }
        // ---- insert phase ----
        if (c >= 1) {
            newmin[1] = v;
            for (int l = 2; l <= c; ++l)
                newmin[static_cast<std::size_t>(l)] =
                    v > 1 ? fwZ[static_cast<std::size_t>(l - 1)].query(static_cast<int>(v) - 1)
                          : kNone;
            for (int l = 1; l <= c; ++l) {
                if (newmin[static_cast<std::size_t>(l)] == kNone) continue;
                fwZ[static_cast<std::size_t>(l)].update(static_cast<int>(v),
                                                        newmin[static_cast<std::size_t>(l)]);
                gmZ[static_cast<std::size_t>(l)] = std::max(
                    gmZ[static_cast<std::size_t>(l)], newmin[static_cast<std::size_t>(l)]);
            }
            if (a == 0 && b == 0 && gmZ[static_cast<std::size_t>(c)] != kNone) return true;
        }
        if (b >= 1)
            for (int l = 1; l <= b; ++l)
                if (feasY[static_cast<std::size_t>(l)])
                    mxY[static_cast<std::size_t>(l)] =
                        std::max(mxY[static_cast<std::size_t>(l)], v);
        if (a >= 1)
            for (int l = 1; l <= a; ++l)
                if (K[static_cast<std::size_t>(l)] != kNone)
                    fwX[static_cast<std::size_t>(l)].update(static_cast<int>(v),
                                                            K[static_cast<std::size_t>(l)]);
    }
    return false;
}

inline std::vector<MonotoneBlock> merge_runs(const std::vector<MonotoneBlock>& blocks) {
    std::vector<MonotoneBlock> m;
    for (const auto& b : blocks) {
        if (b.len <= 0) continue;
        if (!m.empty() && m.back().dir == b.dir)
            m.back().len += b.len;
        else
            m.push_back(b);
    }
    return m;
}

} // namespace detail

/// Containment of a direct sum of monotone runs.  Patterns that reduce to
/// J_a + I_b + J_c (everything the bijection pipeline asserts against) run
/// in O(n log n); other shapes fall back to the generic search.
inline bool contains_monotone_blocks(const Permutation& sigma,
                                     const std::vector<MonotoneBlock>& blocks) {
    auto m = detail::merge_runs(blocks);
    if (m.empty()) return true;
    int a = 0, b = 0, c = 0;
    bool fits = true;
    if (m.size() == 1) {
        if (m[0].dir == Direction::increasing)
            b = m[0].len;
        else
            c = m[0].len;
    } else if (m.size() == 2) {
        if (m[0].dir == Direction::decreasing) {
            a = m[0].len;
            b = m[1].len;
        } else {
            b = m[0].len;
            c = m[1].len;
        }
    } else if (m.size() == 3 && m[0].dir == Direction::decreasing) {
        a = m[0].len;
        b = m[1].len;
        c = m[2].len;
    } else {
        fits = false;
    }
    if (!fits) {
        std::vector<MonotoneBlock> copy(m.begin(), m.end());
        return contains(sigma, block_pattern(copy));
    }
    return detail::contains_dec_inc_dec(sigma, a, b, c);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

inline constexpr int kDefaultEnumerationBound = 10;

/// Visits every element of Av_n(patterns) exactly once, in lexicographic
/// order of one-line notation.  A prefix already containing a pattern is
/// never extended.
template <typename Visitor>
void for_each_avoider(int n, const PatternSet& ps, Visitor&& visit,
                      int bound = kDefaultEnumerationBound) {
    if (n > bound)
        throw BoundExceeded("enumerate_avoiders: n = " + std::to_string(n) +
                            " exceeds bound " + std::to_string(bound));
    if (n < 0) throw UsageError("enumerate_avoiders: negative n");

    std::vector<int> prefix;
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);

    auto prefix_ok = [&]() {
        // Reduce the prefix to relative order; containment only depends on it.
        std::vector<int> rel(prefix);
        std::vector<int> sorted(rel);
        std::sort(sorted.begin(), sorted.end());
        for (auto& x : rel)
            x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                                 sorted.begin()) + 1;
        Permutation p(std::move(rel));
        for (const auto& pat : ps.patterns())
            if (contains(p, pat)) return false;
        return true;
    };

    std::function<void()> rec = [&]() {
        if (static_cast<int>(prefix.size()) == n) {
            visit(Permutation(std::vector<int>(prefix)));
            return;
        }
        for (int v = 1; v <= n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            prefix.push_back(v);
            used[static_cast<std::size_t>(v)] = 1;
            if (prefix_ok()) rec();
            used[static_cast<std::size_t>(v)] = 0;
            prefix.pop_back();
        }
    };
    rec();
}

inline std::vector<Permutation> enumerate_avoiders(int n, const PatternSet& ps,
                                                   int bound = kDefaultEnumerationBound) {
    std::vector<Permutation> out;
    for_each_avoider(n, ps, [&](Permutation p) { out.push_back(std::move(p)); }, bound);
    return out;
}

inline std::uint64_t count_avoiders(int n, const PatternSet& ps,
                                    int bound = kDefaultEnumerationBound) {
    std::uint64_t c = 0;
    for_each_avoider(n, ps, [&](const Permutation&) { ++c; }, bound);
    return c;
}

} // namespace permutonlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permutonlab/cache.hpp"
#include "permutonlab/errors.hpp"
#include "permutonlab/growth.hpp"
#include "permutonlab/permutation.hpp"
#include "permutonlab/shape.hpp"

namespace permutonlab {

// ---------------------------------------------------------------------------
// Coloring
// ---------------------------------------------------------------------------

/// The box coloring attached to (pi, tau): box (i, j) of the n x n grid is
/// blue when some occurrence of tau uses only points (i', pi(i')) with
/// i' > i and pi(i') > j, and white (frozen) otherwise.  The blue region is
/// southwest-closed, so it is stored as one column threshold: box (i, j) is
/// blue iff j < threshold[i].
struct Coloring {
    int n = 0;
    Permutation tau;
    std::vector<int> threshold; // size n + 1, indices 0..n, non-increasing

    bool is_blue(int col, int row) const {
        return col >= 1 && col <= n && row >= 1 && row <= n &&
               row < threshold[static_cast<std::size_t>(col)];
    }

    std::int64_t blue_count() const {
        std::int64_t c = 0;
        for (int i = 1; i <= n; ++i)
            c += std::max(0, std::min(n + 1, threshold[static_cast<std::size_t>(i)]) - 1);
        return c;
    }

    std::vector<std::pair<int, int>> blue_boxes() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j < threshold[static_cast<std::size_t>(i)] && j <= n; ++j)
                out.emplace_back(i, j);
        return out;
    }

    std::vector<std::pair<int, int>> white_boxes() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= n; ++i)
            for (int j = std::max(1, threshold[static_cast<std::size_t>(i)]); j <= n; ++j)
                out.emplace_back(i, j);
        return out;
    }
};

namespace detail {

/// Recognizes tau = I_a + J_b (either part may be empty).
inline std::optional<std::pair<int, int>> as_inc_dec_blocks(const Permutation& tau) {
    int m = tau.size();
    for (int a = 0; a <= m; ++a) {
        if (tau == block_pattern({{Direction::increasing, a},
                                  {Direction::decreasing, m - a}}))
            return std::make_pair(a, m - a);
    }
    return std::nullopt;
}

// Threshold computation for tau = I_a + J_b by one right-to-left sweep.
// threshold[i] = 1 + max j such that box (i, j) is blue
//              = max over occurrences of tau among points right of column i
//                of the occurrence's minimal value (0 when none).
inline std::vector<int> coloring_thresholds_inc_dec(const Permutation& sigma, int a, int b) {
    int n = sigma.size();
    std::vector<int> V(static_cast<std::size_t>(n) + 1, 0);
    constexpr std::int64_t kNone = detail::PrefixMax::kNone;

    // Decreasing chains among processed points, per length: a Fenwick tree
    // over chain start values holding the best (max) chain minimum, plus the
    // global best minimum.
    std::vector<detail::PrefixMax> fwMin;
    std::vector<std::int64_t> gm(static_cast<std::size_t>(b) + 1, kNone);
    if (b >= 1) fwMin.assign(static_cast<std::size_t>(b) + 1, detail::PrefixMax(n));
    // amax[k]: max value of a processed point starting an increasing chain of
    // length k whose end sees a full decreasing chain strictly northeast.
    std::vector<std::int64_t> amax(static_cast<std::size_t>(a) + 1, kNone);
    std::vector<char> feas(static_cast<std::size_t>(a) + 1, 0);
    std::vector<std::int64_t> newmin(static_cast<std::size_t>(b) + 1, kNone);

    for (int i = n; i >= 1; --i) {
        std::int64_t v = sigma(i);
        bool startsOcc = false;
        if (a >= 1) {
            feas[1] = (b == 0) || gm[static_cast<std::size_t>(b)] > v;
            for (int k = 2; k <= a; ++k)
                feas[static_cast<std::size_t>(k)] = amax[static_cast<std::size_t>(k - 1)] > v;
            startsOcc = feas[static_cast<std::size_t>(a)];
        }
        if (b >= 1) {
            newmin[1] = v;
            for (int l = 2; l <= b; ++l)
                newmin[static_cast<std::size_t>(l)] =
                    v > 1 ? fwMin[static_cast<std::size_t>(l - 1)].query(static_cast<int>(v) - 1)
                          : kNone;
            for (int l = 1; l <= b; ++l) {
                if (newmin[static_cast<std::size_t>(l)] == kNone) continue;
                fwMin[static_cast<std::size_t>(l)].update(static_cast<int>(v),
                                                          newmin[static_cast<std::size_t>(l)]);
                gm[static_cast<std::size_t>(l)] =
                    std::max(gm[static_cast<std::size_t>(l)], newmin[static_cast<std::size_t>(l)]);
            }
        }
        if (a >= 1) {
            for (int k = 1; k <= a; ++k)
                if (feas[static_cast<std::size_t>(k)])
                    amax[static_cast<std::size_t>(k)] =
                        std::max(amax[static_cast<std::size_t>(k)], v);
            V[static_cast<std::size_t>(i - 1)] =
                std::max(V[static_cast<std::size_t>(i)],
                         startsOcc ? static_cast<int>(v) : 0);
        } else {
            std::int64_t best = gm[static_cast<std::size_t>(b)];
            V[static_cast<std::size_t>(i - 1)] = best == kNone ? 0 : static_cast<int>(best);
        }
    }
    return V;
}

// Reference engine for arbitrary tau: per column, binary search the largest
// blue row, testing containment on the reduced point set.
inline std::vector<int> coloring_thresholds_generic(const Permutation& sigma,
                                                    const Permutation& tau) {
    int n = sigma.size();
    std::vector<int> V(static_cast<std::size_t>(n) + 1, 0);
    auto suffix_above_contains = [&](int i, int j) {
        std::vector<int> vals;
        for (int t = i + 1; t <= n; ++t)
            if (sigma(t) > j) vals.push_back(sigma(t));
        std::vector<int> sorted(vals);
        std::sort(sorted.begin(), sorted.end());
        for (auto& x : vals)
            x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                                 sorted.begin()) + 1;
        return contains(Permutation(std::move(vals)), tau);
    };
    for (int i = 0; i <= n; ++i) {
        // largest j with box (i, j) blue, i.e. occurrence above value j
        int lo = 0, hi = n; // predicate on j: occurrence with all values > j
        if (!suffix_above_contains(i, 0)) {
            V[static_cast<std::size_t>(i)] = 0;
            continue;
        }
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (suffix_above_contains(i, mid))
                lo = mid;
            else
                hi = mid - 1;
        }
        V[static_cast<std::size_t>(i)] = lo + 1;
    }
    return V;
}

} // namespace detail

enum class ColoringEngine { automatic, fast, generic };

inline Coloring color_boxes(const Permutation& pi, const Permutation& tau,
                            ColoringEngine engine = ColoringEngine::automatic) {
    Coloring col;
    col.n = pi.size();
    col.tau = tau;
    if (tau.empty()) {
        // the empty pattern occurs vacuously: everything is blue
        col.threshold.assign(static_cast<std::size_t>(col.n) + 1, col.n + 1);
        return col;
    }
    auto blocks = detail::as_inc_dec_blocks(tau);
    bool fast = engine == ColoringEngine::fast ||
                (engine == ColoringEngine::automatic && blocks.has_value());
    if (fast && !blocks)
        throw UsageError("color_boxes: fast engine requires tau = I_a + J_b");
    col.threshold = fast
        ? detail::coloring_thresholds_inc_dec(pi, blocks->first, blocks->second)
        : detail::coloring_thresholds_generic(pi, tau);
    return col;
}

inline std::vector<std::pair<int, int>> frozen_region(const Permutation& pi,
                                                      const Permutation& tau) {
    return color_boxes(pi, tau).white_boxes();
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

/// The shape left after deleting all white boxes together with the rows and
/// columns of white-box points, plus the traversal formed by the blue-box
/// points and the index maps back into [n].
struct LambdaExtraction {
    FerrersShape shape;
    Traversal traversal;
    std::vector<int> col_map; // lambda column c -> original column, ascending
    std::vector<int> row_map; // lambda row j -> original row (value), ascending
};

inline LambdaExtraction extract_lambda_from(const Permutation& pi, const Coloring& col) {
    int n = pi.size();
    LambdaExtraction ex;
    for (int i = 1; i <= n; ++i)
        if (pi(i) < col.threshold[static_cast<std::size_t>(i)]) ex.col_map.push_back(i);
    for (int i : ex.col_map) ex.row_map.push_back(pi(i));
    std::sort(ex.row_map.begin(), ex.row_map.end());

    std::vector<int> rows;
    rows.reserve(ex.row_map.size());
    for (int y : ex.row_map) {
        int len = 0;
        for (int i : ex.col_map) {
            if (col.is_blue(i, y))
                ++len;
            else
                break; // thresholds are non-increasing along kept columns
        }
        rows.push_back(len); // weakly decreasing since row values ascend
    }

    std::vector<int> rc(ex.row_map.size(), 0);
    for (std::size_t c = 0; c < ex.col_map.size(); ++c) {
        int i = ex.col_map[c];
        int y = pi(i);
        auto it = std::lower_bound(ex.row_map.begin(), ex.row_map.end(), y);
        rc[static_cast<std::size_t>(it - ex.row_map.begin())] = static_cast<int>(c) + 1;
    }
    try {
        ex.shape = FerrersShape(std::move(rows));
        ex.traversal = Traversal(ex.shape, std::move(rc));
    } catch (const Error& e) {
        throw NotATraversal(std::string("extract_lambda: blue points do not form a traversal: ") +
                            e.what());
    }
    return ex;
}

inline LambdaExtraction extract_lambda(const Permutation& pi, const Permutation& tau,
                                       ColoringEngine engine = ColoringEngine::automatic) {
    return extract_lambda_from(pi, color_boxes(pi, tau, engine));
}

// ---------------------------------------------------------------------------
// Inner shape-Wilf strategies
// ---------------------------------------------------------------------------

enum class InnerStrategy { automatic, growth, enumeration };

inline constexpr int kEnumerationStrategyMaxBoxes = 16;

/// Strategy B: enumerate the I_k-avoiding and J_k-avoiding traversals of the
/// shape in lexicographic order and pair them by index.  The pairing is
/// cached per (shape, k) as "index_I<TAB>index_J" lines.
class EnumerationBijection {
public:
    EnumerationBijection(const FerrersShape& shape, int k,
                         const std::optional<std::filesystem::path>& cache_dir)
        : shape_(shape), k_(k) {
        Permutation ik = increasing_pattern(k);
        Permutation jk = decreasing_pattern(k);
        int bound = static_cast<int>(shape.boxes());
        avoidersI_ = enumerate_avoiding_traversals(shape, ik, bound);
        avoidersJ_ = enumerate_avoiding_traversals(shape, jk, bound);
        if (avoidersI_.size() != avoidersJ_.size())
            throw InnerBijectionFailure("enumeration strategy: |S_lambda(I_k)| = " +
                                        std::to_string(avoidersI_.size()) +
                                        " but |S_lambda(J_k)| = " +
                                        std::to_string(avoidersJ_.size()) + " on shape " +
                                        shape.str());
        pairing_.resize(avoidersI_.size());
        if (!load_cache(cache_dir)) {
            for (std::size_t i = 0; i < pairing_.size(); ++i) pairing_[i] = i;
            store_cache(cache_dir);
        }
    }

    Traversal map_i_to_j(const Traversal& t) const {
        auto it = std::lower_bound(avoidersI_.begin(), avoidersI_.end(), t);
        if (it == avoidersI_.end() || !(*it == t))
            throw PreconditionViolated("enumeration strategy: input does not avoid I_k");
        return avoidersJ_[pairing_[static_cast<std::size_t>(it - avoidersI_.begin())]];
    }

    Traversal map_j_to_i(const Traversal& t) const {
        auto it = std::lower_bound(avoidersJ_.begin(), avoidersJ_.end(), t);
        if (it == avoidersJ_.end() || !(*it == t))
            throw PreconditionViolated("enumeration strategy: input does not avoid J_k");
        std::size_t jidx = static_cast<std::size_t>(it - avoidersJ_.begin());
        for (std::size_t i = 0; i < pairing_.size(); ++i)
            if (pairing_[i] == jidx) return avoidersI_[i];
        throw InnerBijectionFailure("enumeration strategy: broken pairing");
    }

    std::size_t class_size() const { return avoidersI_.size(); }

private:
    std::filesystem::path cache_file(const std::filesystem::path& dir) const {
        return dir / ("bwx_pairs_" + sanitize_cache_key(shape_.str()) + "_k" +
                      std::to_string(k_) + ".tsv");
    }

    bool load_cache(const std::optional<std::filesystem::path>& dir) {
        if (!dir) return false;
        std::ifstream in(cache_file(*dir));
        if (!in) return false;
        std::size_t count = 0;
        std::string line;
        std::vector<std::size_t> pairs(pairing_.size(), pairing_.size());
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::size_t a, b;
            if (!(ls >> a >> b)) return false;
            if (a >= pairs.size() || b >= pairs.size()) return false;
            pairs[a] = b;
            ++count;
        }
        if (count != pairing_.size()) return false;
        pairing_ = std::move(pairs);
        return true;
    }

    void store_cache(const std::optional<std::filesystem::path>& dir) const {
        if (!dir) return;
        std::string content;
        for (std::size_t i = 0; i < pairing_.size(); ++i) {
            content += std::to_string(i);
            content += '\t';
            content += std::to_string(pairing_[i]);
            content += '\n';
        }
        atomic_write_file(cache_file(*dir), content);
    }

    FerrersShape shape_;
    int k_;
    std::vector<Traversal> avoidersI_;
    std::vector<Traversal> avoidersJ_;
    std::vector<std::size_t> pairing_;
};

// ---------------------------------------------------------------------------
// The induced bijection on permutations
// ---------------------------------------------------------------------------

enum class BwxDirection { i_to_j, j_to_i };

struct BwxOptions {
    InnerStrategy strategy = InnerStrategy::automatic;
    std::optional<std::filesystem::path> cache_dir;
    bool check_stability = true; // recolor the output and compare shapes
};

namespace detail {

inline std::vector<MonotoneBlock> tau_blocks(const Permutation& tau) {
    auto ab = as_inc_dec_blocks(tau);
    if (!ab) return {};
    return {{Direction::increasing, ab->first}, {Direction::decreasing, ab->second}};
}

inline bool avoids_k_plus_tau(const Permutation& p, int k, Direction dir,
                              const Permutation& tau) {
    auto ab = as_inc_dec_blocks(tau);
    if (ab) {
        std::vector<MonotoneBlock> blocks{{dir, k},
                                          {Direction::increasing, ab->first},
                                          {Direction::decreasing, ab->second}};
        return !contains_monotone_blocks(p, blocks);
    }
    return !contains(p, direct_sum(monotone(k, dir), tau));
}

} // namespace detail

/// One Backelin-West-Xin step: replaces the blue-region traversal, an
/// I_k-avoider (direction i_to_j) by its J_k-avoiding partner under the
/// selected inner strategy, leaving every frozen point fixed.
inline Permutation bwx_map(const Permutation& pi, int k, const Permutation& tau,
                           BwxDirection dir, const BwxOptions& opt = {}) {
    Direction from = dir == BwxDirection::i_to_j ? Direction::increasing : Direction::decreasing;
    Direction to = dir == BwxDirection::i_to_j ? Direction::decreasing : Direction::increasing;
    if (!detail::avoids_k_plus_tau(pi, k, from, tau))
        throw PreconditionViolated("bwx_map: input contains the source pattern");

    Coloring col = color_boxes(pi, tau);
    LambdaExtraction ex = extract_lambda_from(pi, col);

    Traversal image;
    bool useGrowth = opt.strategy == InnerStrategy::growth ||
                     (opt.strategy == InnerStrategy::automatic &&
                      ex.shape.boxes() > kEnumerationStrategyMaxBoxes);
    if (useGrowth) {
        image = border_conjugate_bijection(ex.traversal);
    } else {
        EnumerationBijection bij(ex.shape, k, opt.cache_dir);
        image = dir == BwxDirection::i_to_j ? bij.map_i_to_j(ex.traversal)
                                            : bij.map_j_to_i(ex.traversal);
    }

    std::vector<int> out(pi.one_line());
    for (int j = 1; j <= image.size(); ++j) {
        int origRow = ex.row_map[static_cast<std::size_t>(j - 1)];
        int origCol = ex.col_map[static_cast<std::size_t>(image.col_of_row(j) - 1)];
        out[static_cast<std::size_t>(origCol - 1)] = origRow;
    }
    Permutation result(std::move(out));

    // frozen points are fixed and moved points stay inside the blue region
    for (int i = 1; i <= pi.size(); ++i) {
        bool kept = std::binary_search(ex.col_map.begin(), ex.col_map.end(), i);
        if (!kept && result(i) != pi(i))
            throw InnerBijectionFailure("bwx_map: frozen point moved at column " +
                                        std::to_string(i));
        if (kept && !col.is_blue(i, result(i)))
            throw InnerBijectionFailure("bwx_map: point left the blue region at column " +
                                        std::to_string(i));
    }
    if (!detail::avoids_k_plus_tau(result, k, to, tau))
        throw InnerBijectionFailure("bwx_map: image is outside the target class");
    if (opt.check_stability) {
        LambdaExtraction ex2 = extract_lambda(result, tau);
        if (!(ex2.shape == ex.shape) || ex2.col_map != ex.col_map || ex2.row_map != ex.row_map)
            throw InnerBijectionFailure("bwx_map: recoloring the image changed the extraction");
    }
    return result;
}

// ---------------------------------------------------------------------------
// The four-step pipeline
// ---------------------------------------------------------------------------

/// sigma -> rho -> rho^rc -> pi^rc -> pi with both BWX steps and the class
/// memberships checked at every stage.
struct PipelineTrace {
    ClassSpec spec;
    Permutation sigma, rho, rho_rc, pi_rc, pi;
    Coloring coloring1, coloring2;   // colorings used by the two BWX steps
    FerrersShape lambda1, lambda2;   // extracted shapes of the two steps
};

inline PipelineTrace pipeline(const Permutation& sigma, const ClassSpec& spec,
                              const BwxOptions& opt = {}) {
    int d1 = spec.k1 + spec.k2 + spec.k3;
    if (contains_monotone_blocks(sigma, {{Direction::increasing, d1}}))
        throw PreconditionViolated("pipeline: input contains I_" + std::to_string(d1));

    PipelineTrace tr;
    tr.spec = spec;
    tr.sigma = sigma;

    Permutation tau1 = block_pattern({{Direction::increasing, spec.k2 + spec.k3}});
    tr.coloring1 = color_boxes(sigma, tau1);
    tr.lambda1 = extract_lambda_from(sigma, tr.coloring1).shape;
    tr.rho = bwx_map(sigma, spec.k1, tau1, BwxDirection::i_to_j, opt);
    if (!detail::avoids_k_plus_tau(tr.rho, spec.k1, Direction::decreasing, tau1))
        throw InnerBijectionFailure("pipeline: rho escaped its class");

    tr.rho_rc = reverse_complement(tr.rho);
    {
        std::vector<MonotoneBlock> cls{{Direction::increasing, spec.k3},
                                       {Direction::increasing, spec.k2},
                                       {Direction::decreasing, spec.k1}};
        if (contains_monotone_blocks(tr.rho_rc, cls))
            throw InnerBijectionFailure("pipeline: rho^rc escaped its class");
    }

    Permutation tau2 = block_pattern({{Direction::increasing, spec.k2},
                                      {Direction::decreasing, spec.k1}});
    tr.coloring2 = color_boxes(tr.rho_rc, tau2);
    tr.lambda2 = extract_lambda_from(tr.rho_rc, tr.coloring2).shape;
    tr.pi_rc = bwx_map(tr.rho_rc, spec.k3, tau2, BwxDirection::i_to_j, opt);
    {
        std::vector<MonotoneBlock> cls{{Direction::decreasing, spec.k3},
                                       {Direction::increasing, spec.k2},
                                       {Direction::decreasing, spec.k1}};
        if (contains_monotone_blocks(tr.pi_rc, cls))
            throw InnerBijectionFailure("pipeline: pi^rc escaped its class");
    }

    tr.pi = reverse_complement(tr.pi_rc);
    {
        std::vector<MonotoneBlock> cls{{Direction::decreasing, spec.k1},
                                       {Direction::increasing, spec.k2},
                                       {Direction::decreasing, spec.k3}};
        if (contains_monotone_blocks(tr.pi, cls))
            throw InnerBijectionFailure("pipeline: pi escaped the target class");
    }
    return tr;
}

/// Convenience wrapper returning only the endpoint.
inline Permutation pipeline_image(const Permutation& sigma, const ClassSpec& spec,
                                  const BwxOptions& opt = {}) {
    return pipeline(sigma, spec, opt).pi;
}

} // namespace permutonlab

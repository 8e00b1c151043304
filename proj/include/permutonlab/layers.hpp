#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "permutonlab/errors.hpp"
#include "permutonlab/permutation.hpp"

namespace permutonlab {

/// Canonical partition of [n] into layers of iterated left-to-right minima:
/// layer 1 holds the left-to-right minima, layer 2 the minima of what is
/// left, and so on.  Every layer is decreasing; the number of layers equals
/// the longest increasing subsequence.
struct LayerPartition {
    std::vector<std::vector<int>> layers; // 1-based indices, increasing
    std::vector<int> layer_of;            // layer_of[i-1] = layer of index i

    int num_layers() const { return static_cast<int>(layers.size()); }
};

inline LayerPartition layer_partition(const Permutation& sigma) {
    int n = sigma.size();
    LayerPartition lp;
    lp.layer_of.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> lasts; // current minimum per layer, increasing across layers
    for (int i = 1; i <= n; ++i) {
        int v = sigma(i);
        auto it = std::upper_bound(lasts.begin(), lasts.end(), v);
        std::size_t l = static_cast<std::size_t>(it - lasts.begin());
        if (l == lasts.size()) {
            lasts.push_back(v);
            lp.layers.emplace_back();
        } else {
            lasts[l] = v;
        }
        lp.layers[l].push_back(i);
        lp.layer_of[static_cast<std::size_t>(i - 1)] = static_cast<int>(l) + 1;
    }
    return lp;
}

/// j^l(i): the largest index of layer l strictly before i, or 0.
inline int predecessor(const LayerPartition& lp, int l, int i) {
    if (l < 1 || l > lp.num_layers()) return 0;
    const auto& layer = lp.layers[static_cast<std::size_t>(l - 1)];
    auto it = std::lower_bound(layer.begin(), layer.end(), i);
    if (it == layer.begin()) return 0;
    return *(it - 1);
}

// ---------------------------------------------------------------------------
// Interpolated layer paths
// ---------------------------------------------------------------------------

struct PathFamily {
    // one polyline per layer through (0,0), the scaled layer points, (1,0)
    std::vector<std::vector<std::pair<double, double>>> paths;
};

/// Scaled anti-diagonal deviations per layer: x = i/(n+1),
/// y = (sigma(i) + i - (n+1)) / sqrt(2 d n).
inline PathFamily paths(const Permutation& sigma, int d) {
    if (lis(sigma) > d)
        throw LayerOverflow("paths: permutation has more than d layers");
    LayerPartition lp = layer_partition(sigma);
    int n = sigma.size();
    double scale = std::sqrt(2.0 * d * n);
    PathFamily pf;
    pf.paths.resize(static_cast<std::size_t>(d));
    for (int l = 1; l <= d; ++l) {
        auto& path = pf.paths[static_cast<std::size_t>(l - 1)];
        path.emplace_back(0.0, 0.0);
        if (l <= lp.num_layers()) {
            for (int i : lp.layers[static_cast<std::size_t>(l - 1)])
                path.emplace_back(static_cast<double>(i) / (n + 1),
                                  (sigma(i) + i - (n + 1)) / scale);
        }
        path.emplace_back(1.0, 0.0);
    }
    return pf;
}

// ---------------------------------------------------------------------------
// The five finite-n regularity conditions
// ---------------------------------------------------------------------------

struct GoodnessReport {
    double epsilon = 0;
    int d = 0;
    bool c[5] = {false, false, false, false, false};
    std::string witness[5]; // first violating instance per failed condition

    bool all_good() const { return c[0] && c[1] && c[2] && c[3] && c[4]; }
};

/// Evaluates, literally as printed, the five conditions defining the good
/// subset of Av(I_{d+1}):
///  1. sup_i |sigma(i)+i-n-1| < n^.6
///  2. layer density d^{-1}(j-i) +- |j-i|^.6 on window intervals longer
///     than n^.1
///  3. same-layer slope |sigma(i)+i-sigma(j)-j| < |j-i|^.6 on those intervals
///  4. predecessor gap i - j^l(i) < n^.2 for every layer and window index
///  5. layer separation sigma(j^{l+1}(i)) - sigma(i) > n^.4 for i in a
///     window layer below the top
/// The exponents are fixed; no asymptotic slack is added, so at small n the
/// report is expected to come out negative.
inline GoodnessReport goodness(const Permutation& sigma, double epsilon, int d) {
    int n = sigma.size();
    if (!(epsilon > 0) || !(epsilon < 0.5))
        throw UsageError("goodness: epsilon must lie in (0, 0.5)");
    if (lis(sigma) > d)
        throw PreconditionViolated("goodness: input does not avoid I_{d+1}");

    GoodnessReport rep;
    rep.epsilon = epsilon;
    rep.d = d;
    LayerPartition lp = layer_partition(sigma);

    double n06 = std::pow(n, 0.6);
    double n01 = std::pow(n, 0.1);
    double n02 = std::pow(n, 0.2);
    double n04 = std::pow(n, 0.4);
    double wLo = epsilon * n;
    double wHi = (1 - epsilon) * n;
    auto in_window = [&](int i) { return i >= wLo && i <= wHi; };

    // 1: global anti-diagonal deviation
    rep.c[0] = true;
    for (int i = 1; i <= n; ++i) {
        if (!(std::abs(sigma(i) + i - n - 1) < n06)) {
            rep.c[0] = false;
            rep.witness[0] = "i=" + std::to_string(i) + " deviation=" +
                             std::to_string(std::abs(sigma(i) + i - n - 1));
            break;
        }
    }

    // prefix counts per layer for condition 2
    std::vector<std::vector<int>> pref(static_cast<std::size_t>(d) + 1,
                                       std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
    for (int i = 1; i <= n; ++i) {
        for (int l = 1; l <= d; ++l)
            pref[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] =
                pref[static_cast<std::size_t>(l)][static_cast<std::size_t>(i - 1)];
        int l = lp.layer_of[static_cast<std::size_t>(i - 1)];
        if (l <= d) ++pref[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
    }

    rep.c[1] = true;
    for (int i = 1; i <= n && rep.c[1]; ++i) {
        if (!in_window(i)) continue;
        for (int j = i + 1; j <= n; ++j) {
            if (!in_window(j)) break;
            if (!(j - i > n01)) continue;
            double target = static_cast<double>(j - i) / d;
            double slack = std::pow(j - i, 0.6);
            for (int l = 1; l <= d; ++l) {
                int cnt = pref[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] -
                          pref[static_cast<std::size_t>(l)][static_cast<std::size_t>(i - 1)];
                if (!(std::abs(cnt - target) < slack)) {
                    rep.c[1] = false;
                    rep.witness[1] = "l=" + std::to_string(l) + " [" + std::to_string(i) + "," +
                                     std::to_string(j) + "] count=" + std::to_string(cnt);
                    break;
                }
            }
            if (!rep.c[1]) break;
        }
    }

    rep.c[2] = true;
    for (int l = 1; l <= lp.num_layers() && rep.c[2]; ++l) {
        const auto& layer = lp.layers[static_cast<std::size_t>(l - 1)];
        for (std::size_t a = 0; a < layer.size() && rep.c[2]; ++a) {
            int i = layer[a];
            if (!in_window(i)) continue;
            for (std::size_t b = a + 1; b < layer.size(); ++b) {
                int j = layer[b];
                if (!in_window(j)) break;
                if (!(j - i > n01)) continue;
                double dev = std::abs((sigma(i) + i) - (sigma(j) + j));
                if (!(dev < std::pow(j - i, 0.6))) {
                    rep.c[2] = false;
                    rep.witness[2] = "l=" + std::to_string(l) + " i=" + std::to_string(i) +
                                     " j=" + std::to_string(j);
                    break;
                }
            }
        }
    }

    rep.c[3] = true;
    for (int i = 1; i <= n && rep.c[3]; ++i) {
        if (!in_window(i)) continue;
        for (int l = 1; l <= d; ++l) {
            int p = predecessor(lp, l, i);
            if (!(i - p < n02)) {
                rep.c[3] = false;
                rep.witness[3] = "l=" + std::to_string(l) + " i=" + std::to_string(i) +
                                 " gap=" + std::to_string(i - p);
                break;
            }
        }
    }

    rep.c[4] = true;
    for (int l = 1; l < d && rep.c[4]; ++l) {
        if (l > lp.num_layers()) break;
        for (int i : lp.layers[static_cast<std::size_t>(l - 1)]) {
            if (!in_window(i)) continue;
            int p = predecessor(lp, l + 1, i);
            bool ok = p != 0 && sigma(p) - sigma(i) > n04;
            if (!ok) {
                rep.c[4] = false;
                rep.witness[4] = "l=" + std::to_string(l) + " i=" + std::to_string(i) +
                                 (p == 0 ? " (no predecessor)" : " sep=" +
                                  std::to_string(sigma(p) - sigma(i)));
                break;
            }
        }
    }

    return rep;
}

// ---------------------------------------------------------------------------
// Increasing chains through all layers
// ---------------------------------------------------------------------------

/// Searches for indices i_1 < ... < i_d, one per layer, increasing under
/// sigma, passing through the given i in layer l.  Greedy minimal-index
/// extension first; exact backtracking before reporting absence.
inline std::optional<std::vector<int>> sequence_witness(const Permutation& sigma,
                                                        const LayerPartition& lp, int l,
                                                        int i) {
    int d = lp.num_layers();
    if (l < 1 || l > d || lp.layer_of[static_cast<std::size_t>(i - 1)] != l)
        throw UsageError("sequence_witness: i must lie in layer l");

    std::vector<int> chain(static_cast<std::size_t>(d), 0);
    chain[static_cast<std::size_t>(l - 1)] = i;
    // Downward: the latest element of the layer below is always compatible.
    for (int k = l - 1; k >= 1; --k) {
        int p = predecessor(lp, k, chain[static_cast<std::size_t>(k)]);
        if (p == 0 || sigma(p) >= sigma(chain[static_cast<std::size_t>(k)])) return std::nullopt;
        chain[static_cast<std::size_t>(k - 1)] = p;
    }

    // Upward, greedy: smallest usable index in the next layer.
    auto greedy_up = [&]() {
        for (int k = l + 1; k <= d; ++k) {
            const auto& layer = lp.layers[static_cast<std::size_t>(k - 1)];
            int prev = chain[static_cast<std::size_t>(k - 2)];
            auto it = std::upper_bound(layer.begin(), layer.end(), prev);
            while (it != layer.end() && sigma(*it) <= sigma(prev)) ++it;
            if (it == layer.end()) return false;
            chain[static_cast<std::size_t>(k - 1)] = *it;
        }
        return true;
    };
    if (greedy_up()) return chain;

    // Exact backtracking over the upper layers.
    std::function<bool(int)> rec = [&](int k) -> bool {
        if (k > d) return true;
        const auto& layer = lp.layers[static_cast<std::size_t>(k - 1)];
        int prev = chain[static_cast<std::size_t>(k - 2)];
        for (auto it = std::upper_bound(layer.begin(), layer.end(), prev); it != layer.end();
             ++it) {
            if (sigma(*it) <= sigma(prev)) continue;
            chain[static_cast<std::size_t>(k - 1)] = *it;
            if (rec(k + 1)) return true;
        }
        return false;
    };
    if (rec(l + 1)) return chain;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Southwest staircase regions
// ---------------------------------------------------------------------------

/// SW(C, sigma): the union of the open lower-left rectangles of the points
/// (i, sigma(i)), i in C.  Box (a, b) belongs to the region exactly when
/// some generating point dominates it strictly in both coordinates.
class SwRegion {
public:
    SwRegion(const std::vector<int>& indices, const Permutation& sigma) {
        std::vector<std::pair<int, int>> pts;
        pts.reserve(indices.size());
        for (int i : indices) pts.emplace_back(i, sigma(i));
        std::sort(pts.begin(), pts.end());
        // Pareto-maximal staircase: scan right to left keeping rising values.
        int bestY = 0;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            if (it->second > bestY) {
                bestY = it->second;
                frontier_.push_back(*it);
            }
        }
        std::reverse(frontier_.begin(), frontier_.end()); // x ascending, y descending
    }

    bool contains_box(int a, int b) const {
        // first frontier point with x > a has the largest y among them
        auto it = std::upper_bound(frontier_.begin(), frontier_.end(), std::make_pair(a, INT32_MAX));
        return it != frontier_.end() && it->second > b;
    }

    /// Largest y such that (a, y) is still inside, per column a (0 if none).
    int column_threshold(int a) const {
        auto it = std::upper_bound(frontier_.begin(), frontier_.end(), std::make_pair(a, INT32_MAX));
        return it == frontier_.end() ? 0 : it->second - 1;
    }

    const std::vector<std::pair<int, int>>& frontier() const { return frontier_; }

private:
    std::vector<std::pair<int, int>> frontier_;
};

inline SwRegion sw_region(const std::vector<int>& indices, const Permutation& sigma) {
    return SwRegion(indices, sigma);
}

} // namespace permutonlab

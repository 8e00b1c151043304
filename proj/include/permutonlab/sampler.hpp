#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "permutonlab/bwx.hpp"
#include "permutonlab/cache.hpp"
#include "permutonlab/errors.hpp"
#include "permutonlab/growth.hpp"
#include "permutonlab/partition.hpp"
#include "permutonlab/permutation.hpp"
#include "permutonlab/rng.hpp"

namespace permutonlab {

struct SamplerLimits {
    int max_n = 1000;
    int max_d = 6;
};

/// The RSK shapes of Av_n(I_{d+1}) with their exact weights f_lambda^2.
/// Shapes are stored as conjugates (at most d parts); the cumulative weights
/// allow binary-search sampling proportional to f^2, and the total equals
/// |Av_n(I_{d+1})|.
class ShapeDistribution {
public:
    ShapeDistribution(int n, int d, SamplerLimits limits = {},
                      const std::optional<std::filesystem::path>& cache_dir = std::nullopt)
        : n_(n), d_(d) {
        if (n < 0 || n > limits.max_n)
            throw BoundExceeded("shape_distribution: n = " + std::to_string(n) +
                                " exceeds bound " + std::to_string(limits.max_n));
        if (d < 1 || d > limits.max_d)
            throw BoundExceeded("shape_distribution: d outside [1, " +
                                std::to_string(limits.max_d) + "]");
        if (!load_cache(cache_dir)) {
            build();
            store_cache(cache_dir);
        }
        finalize();
    }

    int n() const { return n_; }
    int d() const { return d_; }
    const BigInt& total() const { return total_; }
    std::size_t num_shapes() const { return conj_.size(); }

    /// lambda (first part <= d) of the shape at an index.
    Partition shape_at(std::size_t idx) const {
        const auto& mu = conj_[idx];
        std::vector<int> lambda;
        if (!mu.empty()) {
            lambda.resize(static_cast<std::size_t>(mu[0]));
            for (int col = 1; col <= mu[0]; ++col) {
                int h = 0;
                for (int p : mu)
                    if (p >= col) ++h;
                lambda[static_cast<std::size_t>(col - 1)] = h;
            }
        }
        return Partition(std::move(lambda));
    }

    const std::vector<int>& conjugate_at(std::size_t idx) const { return conj_[idx]; }

    BigInt weight_at(std::size_t idx) const { return f_[idx] * f_[idx]; }
    const BigInt& tableau_count_at(std::size_t idx) const { return f_[idx]; }

    std::size_t sample_index(SeededRng& rng) const {
        BigInt u = rng.below_big(total_);
        auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
        return static_cast<std::size_t>(it - prefix_.begin());
    }

private:
    // f for partitions with at most d rows: with l_i = mu_i + d - i,
    // f = n! * prod_{i<j}(l_i - l_j) / prod_i l_i!.
    BigInt f_from_scratch(const std::vector<int>& ell) const {
        BigInt v = 1;
        for (std::size_t i = 0; i < ell.size(); ++i)
            for (std::size_t j = i + 1; j < ell.size(); ++j)
                v *= ell[i] - ell[j];
        BigInt denom = 1;
        for (int l : ell) denom *= fact_[static_cast<std::size_t>(l)];
        return fact_[static_cast<std::size_t>(n_)] * v / denom; // exact
    }

    BigInt vandermonde(const std::vector<int>& ell) const {
        BigInt v = 1;
        for (std::size_t i = 0; i < ell.size(); ++i)
            for (std::size_t j = i + 1; j < ell.size(); ++j)
                v *= ell[i] - ell[j];
        return v;
    }

    void build() {
        fact_.resize(static_cast<std::size_t>(n_) + static_cast<std::size_t>(d_) + 1);
        fact_[0] = 1;
        for (std::size_t i = 1; i < fact_.size(); ++i) fact_[i] = fact_[i - 1] * BigInt(i);

        if (n_ == 0) {
            conj_.push_back({});
            f_.push_back(BigInt(1));
            return;
        }

        std::vector<int> mu(static_cast<std::size_t>(d_), 0);
        // Choose mu_1..mu_{d-2} recursively; the innermost pair (mu_{d-1},
        // mu_d) is swept with single-box moves so f updates by an exact
        // multiply/divide instead of a big-number division per shape.
        std::function<void(int, int, int)> rec = [&](int idx, int cap, int remaining) {
            if (idx == d_ - 1 || d_ == 1) {
                inner_sweep(mu, cap, remaining);
                return;
            }
            // parts idx..d all fit under v: remaining <= v * (d - idx + 1)
            int slots = d_ - idx + 1;
            int lo = (remaining + slots - 1) / slots;
            for (int v = std::min(cap, remaining); v >= lo; --v) {
                mu[static_cast<std::size_t>(idx - 1)] = v;
                rec(idx + 1, v, remaining - v);
            }
            mu[static_cast<std::size_t>(idx - 1)] = 0;
        };
        rec(1, n_, n_);
    }

    void inner_sweep(std::vector<int>& mu, int cap, int remaining) {
        if (d_ == 1) {
            if (remaining > cap) return;
            mu[0] = remaining;
            push_shape(mu, f_from_scratch(ell_of(mu)));
            mu[0] = 0;
            return;
        }
        // idx = d-1: mu[d-2] = a, mu[d-1] = remaining - a
        int hi = std::min(cap, remaining);
        int lo = (remaining + 1) / 2;
        if (hi < lo) return;
        BigInt f;
        BigInt vPrev;
        bool first = true;
        for (int a = hi; a >= lo; --a) {
            mu[static_cast<std::size_t>(d_ - 2)] = a;
            mu[static_cast<std::size_t>(d_ - 1)] = remaining - a;
            std::vector<int> ell = ell_of(mu);
            BigInt v = vandermonde(ell);
            if (first) {
                f = f_from_scratch(ell);
                first = false;
            } else {
                // box moved from part d-1 to part d: l_{d-1} went a+d-... down
                // by one, l_d up by one relative to the previous iteration
                int lPrevTop = (a + 1) + 1; // previous l_{d-1} = mu_{d-1} + 1
                int lPrevBot = (remaining - a - 1); // previous l_d = mu_d
                BigInt t = f * v * lPrevTop;
                t /= vPrev * BigInt(lPrevBot + 1);
                f = t;
            }
            vPrev = v;
            push_shape(mu, f);
        }
        mu[static_cast<std::size_t>(d_ - 2)] = 0;
        mu[static_cast<std::size_t>(d_ - 1)] = 0;
    }

    std::vector<int> ell_of(const std::vector<int>& mu) const {
        std::vector<int> ell(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i)
            ell[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)] + d_ - 1 - i;
        return ell;
    }

    void push_shape(const std::vector<int>& mu, BigInt f) {
        std::vector<int> trimmed;
        for (int p : mu)
            if (p > 0) trimmed.push_back(p);
        conj_.push_back(std::move(trimmed));
        f_.push_back(std::move(f));
    }

    void finalize() {
        prefix_.clear();
        prefix_.reserve(f_.size());
        total_ = 0;
        for (const auto& f : f_) {
            total_ += f * f;
            prefix_.push_back(total_);
        }
    }

    std::filesystem::path cache_file(const std::filesystem::path& dir) const {
        return dir / ("shape_dist_n" + std::to_string(n_) + "_d" + std::to_string(d_) + ".tsv");
    }

    bool load_cache(const std::optional<std::filesystem::path>& dir) {
        if (!dir) return false;
        std::ifstream in(cache_file(*dir));
        if (!in) return false;
        std::string header;
        if (!std::getline(in, header)) return false;
        std::istringstream hs(header);
        int n, d;
        std::size_t count;
        if (!(hs >> n >> d >> count) || n != n_ || d != d_) return false;
        conj_.clear();
        f_.clear();
        std::string line;
        while (std::getline(in, line)) {
            auto tab = line.find('\t');
            if (tab == std::string::npos) return false;
            std::istringstream ms(line.substr(0, tab));
            std::vector<int> mu;
            int x;
            while (ms >> x)
                if (x > 0) mu.push_back(x);
            BigInt f;
            std::istringstream fs(line.substr(tab + 1));
            fs >> std::hex >> f;
            if (fs.fail()) return false;
            conj_.push_back(std::move(mu));
            f_.push_back(std::move(f));
        }
        return conj_.size() == count;
    }

    void store_cache(const std::optional<std::filesystem::path>& dir) const {
        if (!dir) return;
        std::ostringstream out;
        out << n_ << ' ' << d_ << ' ' << conj_.size() << '\n';
        for (std::size_t i = 0; i < conj_.size(); ++i) {
            for (std::size_t k = 0; k < conj_[i].size(); ++k) {
                if (k) out << ' ';
                out << conj_[i][k];
            }
            if (conj_[i].empty()) out << 0;
            out << '\t' << std::hex << f_[i] << std::dec << '\n';
        }
        atomic_write_file(cache_file(*dir), out.str());
    }

    int n_;
    int d_;
    std::vector<std::vector<int>> conj_;
    std::vector<BigInt> f_;
    std::vector<BigInt> prefix_;
    BigInt total_;
    std::vector<BigInt> fact_;
};

/// Process-wide memo so repeated sampling at one (n, d) builds the table once.
inline const ShapeDistribution& shape_distribution(
    int n, int d, SamplerLimits limits = {},
    const std::optional<std::filesystem::path>& cache_dir = std::nullopt) {
    static std::map<std::pair<int, int>, std::unique_ptr<ShapeDistribution>> memo;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, d);
    auto it = memo.find(key);
    if (it == memo.end())
        it = memo.emplace(key, std::make_unique<ShapeDistribution>(n, d, limits, cache_dir))
                 .first;
    return *it->second;
}

/// Exactly uniform sample from Av_n(I_{d+1}): draw a shape proportional to
/// f^2, two independent uniform tableaux by hook walk, then invert RSK.
/// Draw order per sample: shape index, P walk, Q walk.
inline Permutation sample_av_increasing(int n, int d, SeededRng& rng, SamplerLimits limits = {},
                                        const std::optional<std::filesystem::path>& cache_dir =
                                            std::nullopt) {
    const ShapeDistribution& dist = shape_distribution(n, d, limits, cache_dir);
    std::size_t idx = dist.sample_index(rng);
    Partition lambda = dist.shape_at(idx);
    StandardTableau P = hook_walk_sample(lambda, rng);
    StandardTableau Q = hook_walk_sample(lambda, rng);
    return inverse_rsk(P, Q);
}

/// Uniform sample from Av_n(J_k1 + I_k2 + J_k3) by pushing a uniform
/// Av_n(I_{d+1}) sample through the bijection pipeline.
inline Permutation sample_target_class(int n, const ClassSpec& spec, SeededRng& rng,
                                       SamplerLimits limits = {}, const BwxOptions& bwx = {}) {
    Permutation sigma = sample_av_increasing(n, spec.d(), rng, limits, bwx.cache_dir);
    return pipeline_image(sigma, spec, bwx);
}

inline constexpr int kRejectionSamplerBound = 9;

/// Independent uniformity oracle: uniform S_n by Fisher-Yates, accept when
/// the draw avoids I_{d+1}.
inline Permutation rejection_sample_av_increasing(int n, int d, SeededRng& rng) {
    if (n > kRejectionSamplerBound)
        throw BoundExceeded("rejection sampler: n <= " +
                            std::to_string(kRejectionSamplerBound));
    std::vector<int> v(static_cast<std::size_t>(n));
    for (;;) {
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        for (int i = n - 1; i >= 1; --i) {
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
        Permutation p(v);
        if (lis(p) <= d) return p;
    }
}

} // namespace permutonlab

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "permutonlab/errors.hpp"
#include "permutonlab/permutation.hpp"

namespace permutonlab {

namespace detail {

/// Neumaier compensated summation; keeps rectangle queries well inside the
/// 1e-12 budget even at n = 10^4.
class Kahan {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            c_ += (sum_ - t) + x;
        else
            c_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

// Area of {x + y <= t} inside an h x h square anchored at the origin.
inline double corner_area(double t, double h) {
    if (t <= 0) return 0.0;
    if (t >= 2 * h) return h * h;
    if (t <= h) return 0.5 * t * t;
    double u = 2 * h - t;
    return h * h - 0.5 * u * u;
}

} // namespace detail

/// Axis-aligned rectangle inside the unit square.
struct Rect {
    double x0, x1, y0, y1;

    Rect(double a, double b, double c, double d) : x0(a), x1(b), y0(c), y1(d) {
        if (!(x0 <= x1) || !(y0 <= y1) || x0 < -1e-15 || y0 < -1e-15 || x1 > 1 + 1e-15 ||
            y1 > 1 + 1e-15)
            throw InvalidRect("rect out of order or outside the unit square");
    }
};

/// The measure with density n on the n boxes of a permutation, i.e. the
/// empirical permuton of sigma.
class EmpiricalPermuton {
public:
    explicit EmpiricalPermuton(Permutation base) : base_(std::move(base)) {
        if (base_.size() < 1) throw UsageError("EmpiricalPermuton: size >= 1 required");
    }

    const Permutation& base() const { return base_; }
    int n() const { return base_.size(); }

    double rect(const Rect& r) const {
        int nn = n();
        double inv = 1.0 / nn;
        detail::Kahan acc;
        for (int i = 1; i <= nn; ++i) {
            double bx0 = (i - 1) * inv;
            double by0 = (base_(i) - 1) * inv;
            double ox = std::min(r.x1, bx0 + inv) - std::max(r.x0, bx0);
            if (ox <= 0) continue;
            double oy = std::min(r.y1, by0 + inv) - std::max(r.y0, by0);
            if (oy <= 0) continue;
            acc.add(ox * oy);
        }
        return nn * acc.value();
    }

private:
    Permutation base_;
};

inline double mu_rect(const EmpiricalPermuton& mu, const Rect& r) { return mu.rect(r); }

/// Anti-diagonal permuton: mass of a rectangle is the length of the
/// projection of its intersection with x + y = 1.
inline double mu_J_rect(const Rect& r) {
    return std::max(0.0, std::min(r.x1, 1 - r.y0) - std::max(r.x0, 1 - r.y1));
}

/// Diagonal permuton (support x = y).
inline double mu_I_rect(const Rect& r) {
    return std::max(0.0, std::min(r.x1, r.y1) - std::max(r.x0, r.y0));
}

enum class WSide { plus, minus, both };

struct WRegionSpec {
    double epsilon;
    WSide side = WSide::both;

    explicit WRegionSpec(double eps, WSide s = WSide::both) : epsilon(eps), side(s) {
        if (!(eps > 0))
            throw UsageError("WRegionSpec: epsilon must be positive");
    }
};

struct WMasses {
    double plus = 0;
    double minus = 0;
    double both() const { return plus + minus; }
};

/// Exact mass of the corner regions W+ = {x+y > 1+eps} and
/// W- = {x+y < 1-eps}; each box is clipped against the 45-degree line in
/// closed form.
inline WMasses mu_w_masses(const EmpiricalPermuton& mu, double epsilon) {
    if (!(epsilon > 0)) throw UsageError("mu_w: epsilon must be positive");
    int n = mu.n();
    double h = 1.0 / n;
    detail::Kahan plus, minus;
    for (int i = 1; i <= n; ++i) {
        double a = (i - 1) * h;
        double b = (mu.base()(i) - 1) * h;
        plus.add(h * h - detail::corner_area((1 + epsilon) - a - b, h));
        minus.add(detail::corner_area((1 - epsilon) - a - b, h));
    }
    WMasses out;
    out.plus = n * plus.value();
    out.minus = n * minus.value();
    return out;
}

inline double mu_w(const EmpiricalPermuton& mu, const WRegionSpec& spec) {
    WMasses m = mu_w_masses(mu, spec.epsilon);
    switch (spec.side) {
        case WSide::plus: return m.plus;
        case WSide::minus: return m.minus;
        default: return m.both();
    }
}

/// Cumulative grid values F[g][h] = mu([0, g/m] x [0, h/m]).
inline std::vector<std::vector<double>> grid_cdf(const EmpiricalPermuton& mu, int m) {
    int n = mu.n();
    double invn = 1.0 / n;
    std::vector<std::vector<double>> ovx(static_cast<std::size_t>(n) + 1,
                                         std::vector<double>(static_cast<std::size_t>(m) + 1));
    for (int i = 1; i <= n; ++i)
        for (int g = 0; g <= m; ++g) {
            double gx = static_cast<double>(g) / m;
            ovx[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)] =
                std::clamp(gx - (i - 1) * invn, 0.0, invn);
        }
    std::vector<std::vector<double>> F(static_cast<std::size_t>(m) + 1,
                                       std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    for (int g = 1; g <= m; ++g) {
        for (int hh = 1; hh <= m; ++hh) {
            detail::Kahan acc;
            for (int i = 1; i <= n; ++i) {
                double ox = ovx[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)];
                if (ox == 0.0) continue;
                double oy = ovx[static_cast<std::size_t>(mu.base()(i))][static_cast<std::size_t>(hh)];
                if (oy == 0.0) continue;
                acc.add(ox * oy);
            }
            F[static_cast<std::size_t>(g)][static_cast<std::size_t>(hh)] = n * acc.value();
        }
    }
    return F;
}

/// Max over all rectangles with corners on the (m+1) x (m+1) grid of
/// |mu(R) - mu_J(R)|.  Nondecreasing when the grid is refined by an integer
/// factor.
inline double rect_sup_distance(const EmpiricalPermuton& mu, int m) {
    if (m < 2) throw UsageError("rect_sup_distance: grid m >= 2 required");
    auto F = grid_cdf(mu, m);
    double best = 0;
    for (int g0 = 0; g0 <= m; ++g0)
        for (int g1 = g0 + 1; g1 <= m; ++g1)
            for (int h0 = 0; h0 <= m; ++h0)
                for (int h1 = h0 + 1; h1 <= m; ++h1) {
                    double v = F[static_cast<std::size_t>(g1)][static_cast<std::size_t>(h1)] -
                               F[static_cast<std::size_t>(g0)][static_cast<std::size_t>(h1)] -
                               F[static_cast<std::size_t>(g1)][static_cast<std::size_t>(h0)] +
                               F[static_cast<std::size_t>(g0)][static_cast<std::size_t>(h0)];
                    Rect r(static_cast<double>(g0) / m, static_cast<double>(g1) / m,
                           static_cast<double>(h0) / m, static_cast<double>(h1) / m);
                    best = std::max(best, std::abs(v - mu_J_rect(r)));
                }
    return best;
}

// ---------------------------------------------------------------------------
// One-sided lemma diagnostics
// ---------------------------------------------------------------------------

struct StripDiagnostic {
    int i;
    double h_minus;     // mass of H_i^- = [0, 1-(i+1)eps) x [i eps, (i+1)eps + delta)
    double v_plus;      // mass of V_i^+ = [1-(i+1)eps, 1-i eps) x [(i+1)eps + delta, 1)
    double bound;       // 2^{i+1} delta
    bool within_bound;  // h_minus < bound
};

struct OnesideReport {
    double delta = 0;
    double w_plus_delta = 0;
    bool hypothesis = false; // w_plus_delta < delta
    double epsilon = 0;
    double w_minus_eps = 0;
    double w_both_2eps = 0;
    bool concl_minus = false;    // w_minus_eps < epsilon
    bool concl_both = false;     // w_both_2eps < 2 epsilon
    bool implication_holds = false;
    std::vector<StripDiagnostic> strips;
};

struct OnesideOptions {
    bool log2_base = false;      // threshold 2/log(1/delta): natural log by default
    int epsilon_grid = 64;       // epsilon = smallest multiple of 1/grid above threshold
    std::optional<double> epsilon_override;
};

inline OnesideReport oneside_check(const EmpiricalPermuton& mu, double delta,
                                   const OnesideOptions& opt = {}) {
    if (!(delta > 0) || !(delta < 0.5))
        throw InvalidDelta("oneside_check: delta must lie in (0, 0.5)");
    OnesideReport rep;
    rep.delta = delta;
    rep.w_plus_delta = mu_w(mu, WRegionSpec(delta, WSide::plus));
    rep.hypothesis = rep.w_plus_delta < delta;

    double logInv = opt.log2_base ? std::log2(1.0 / delta) : std::log(1.0 / delta);
    double thr = 2.0 / logInv;
    if (opt.epsilon_override) {
        rep.epsilon = *opt.epsilon_override;
        if (!(rep.epsilon > thr))
            throw InvalidDelta("oneside_check: epsilon override must exceed 2/log(1/delta)");
    } else {
        int g = opt.epsilon_grid;
        rep.epsilon = (std::floor(thr * g) + 1) / g;
    }

    rep.w_minus_eps = mu_w(mu, WRegionSpec(rep.epsilon, WSide::minus));
    rep.w_both_2eps = mu_w(mu, WRegionSpec(2 * rep.epsilon, WSide::both));
    rep.concl_minus = rep.w_minus_eps < rep.epsilon;
    rep.concl_both = rep.w_both_2eps < 2 * rep.epsilon;
    rep.implication_holds = !rep.hypothesis || (rep.concl_minus && rep.concl_both);

    double eps = rep.epsilon;
    int m = static_cast<int>(std::floor(1.0 / eps));
    for (int i = 0; i + 2 <= m; ++i) {
        StripDiagnostic s;
        s.i = i;
        double top = std::min(1.0, (i + 1) * eps + delta);
        s.h_minus = mu.rect(Rect(0.0, std::max(0.0, 1 - (i + 1) * eps),
                                 std::min(1.0, i * eps), top));
        s.v_plus = top >= 1.0 ? 0.0
                              : mu.rect(Rect(std::max(0.0, 1 - (i + 1) * eps),
                                             std::max(0.0, 1 - i * eps), top, 1.0));
        s.bound = std::ldexp(delta, i + 1);
        s.within_bound = s.h_minus < s.bound;
        rep.strips.push_back(s);
    }
    return rep;
}

} // namespace permutonlab

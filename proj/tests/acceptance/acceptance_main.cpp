// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion.  Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <vector>

#include "permutonlab/bwx.hpp"
#include "permutonlab/experiment.hpp"
#include "permutonlab/growth.hpp"
#include "permutonlab/layers.hpp"
#include "permutonlab/measure.hpp"
#include "permutonlab/sampler.hpp"
#include "permutonlab/shape.hpp"
#include "permutonlab/stats.hpp"
#include "permutonlab/verify.hpp"

using namespace permutonlab;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& what, double secs) {
    std::printf("%s criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Permutation P(const char* s) { return Permutation::parse(s); }

// 1. Catalan counts for Av(321), n = 1..10, cross-checked by the recurrence.
void criterion1() {
    Timer t;
    const std::vector<std::uint64_t> expected{1,   2,    5,    14,   42,
                                              132, 429, 1430, 4862, 16796};
    std::vector<std::uint64_t> cat(11, 0);
    cat[0] = 1;
    for (int n = 0; n < 10; ++n)
        for (int i = 0; i <= n; ++i) cat[n + 1] += cat[i] * cat[n - i];
    bool pass = true;
    std::string detail;
    for (int n = 1; n <= 10; ++n) {
        std::uint64_t c = count_avoiders(n, PatternSet({P("321")}));
        if (c != expected[static_cast<std::size_t>(n - 1)] ||
            c != cat[static_cast<std::size_t>(n)]) {
            pass = false;
            detail = " first mismatch at n=" + std::to_string(n) + " got " + std::to_string(c);
            break;
        }
    }
    report(1, pass, "|Av_n(321)| = C_n for n = 1..10" + detail, t.seconds());
}

// 2. The partition of S_3 induced by shape-Wilf counts over shapes with at
// most 9 boxes, compared against the classes stated for this criterion.
void criterion2() {
    Timer t;
    std::vector<Permutation> s3;
    oracle::for_each_permutation(3, [&](const Permutation& p) { s3.push_back(p); });
    auto partition_at = [&](int maxBoxes) {
        std::vector<std::vector<std::string>> classes;
        for (const auto& p : s3) {
            bool placed = false;
            for (auto& cl : classes) {
                if (shape_wilf_check(Permutation::parse(cl[0]), p, maxBoxes).equal_everywhere) {
                    cl.push_back(p.str());
                    placed = true;
                    break;
                }
            }
            if (!placed) classes.push_back({p.str()});
        }
        return classes;
    };
    auto classes9 = partition_at(9);
    std::set<std::set<std::string>> got;
    for (const auto& cl : classes9) got.insert(std::set<std::string>(cl.begin(), cl.end()));
    const std::set<std::set<std::string>> want{{"2,1,3", "1,3,2"},
                                               {"1,2,3", "2,3,1", "3,2,1"},
                                               {"3,1,2"}};
    bool pass = got == want;
    std::string detail = "partition over <= 9 boxes is";
    for (const auto& cl : classes9) {
        detail += " {";
        for (std::size_t i = 0; i < cl.size(); ++i) detail += (i ? " " : "") + cl[i];
        detail += "}";
    }
    if (!pass)
        detail += "; expected {213,132} {123,231,321} {312}. No 3-box pattern fits a "
                  "traversable shape below 15 boxes, and at 15+ the data separates "
                  "{231,312} from {123,321,132,213} instead";
    report(2, pass, detail, t.seconds());
}

// 3. Pipeline bijectivity for three class specs at n <= 8.
void criterion3() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (const ClassSpec& spec : {ClassSpec(2, 0, 2), ClassSpec(2, 1, 1), ClassSpec(3, 0, 1)}) {
        Permutation src = increasing_pattern(spec.k1 + spec.k2 + spec.k3);
        Permutation dst = class_pattern(spec);
        for (int n = 0; n <= 8 && pass; ++n) {
            std::set<Permutation> image;
            std::uint64_t count = 0;
            try {
                for (const auto& s : enumerate_avoiders(n, PatternSet({src}))) {
                    ++count;
                    // class membership, frozen fixed points and lambda
                    // stability are asserted inside the pipeline
                    image.insert(pipeline_image(s, spec));
                }
            } catch (const Error& e) {
                pass = false;
                detail = std::string(" pipeline failure: ") + e.what();
                break;
            }
            std::uint64_t target = count_avoiders(n, PatternSet({dst}));
            if (image.size() != count || image.size() != target) {
                pass = false;
                detail = " cardinality mismatch for spec " + spec.str() + " at n=" +
                         std::to_string(n);
            }
        }
    }
    report(3, pass,
           "pipeline bijective onto Av(J_k1+I_k2+J_k3) for (2,0,2),(2,1,1),(3,0,1), n <= 8" +
               detail,
           t.seconds());
}

// 4. Both inner strategies are shape-preserving bijections S(I_k) -> S(J_k)
// on every shape with at most 12 boxes; the growth strategy is an involution.
void criterion4() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (int b = 1; b <= 12 && pass; ++b) {
        for (const auto& sh : shapes_with_boxes(b)) {
            if (!sh.admits_traversal()) continue;
            for (int k = 2; k <= 3 && pass; ++k) {
                std::set<Traversal> js;
                for (const auto& u :
                     enumerate_avoiding_traversals(sh, decreasing_pattern(k), b))
                    js.insert(u);
                // strategy A
                std::set<Traversal> imageA;
                for (const auto& u :
                     enumerate_avoiding_traversals(sh, increasing_pattern(k), b)) {
                    Traversal v = border_conjugate_bijection(u);
                    if (!(v.shape() == sh) || !(border_conjugate_bijection(v) == u)) {
                        pass = false;
                        detail = " growth strategy not an involution on " + sh.str();
                        break;
                    }
                    imageA.insert(v);
                }
                if (pass && imageA != js) {
                    pass = false;
                    detail = " growth image != S(J_" + std::to_string(k) + ") on " + sh.str();
                }
                if (!pass) break;
                // strategy B
                EnumerationBijection bij(sh, k, std::nullopt);
                std::set<Traversal> imageB;
                for (const auto& u :
                     enumerate_avoiding_traversals(sh, increasing_pattern(k), b)) {
                    Traversal v = bij.map_i_to_j(u);
                    if (!(bij.map_j_to_i(v) == u)) {
                        pass = false;
                        detail = " enumeration strategy not invertible on " + sh.str();
                        break;
                    }
                    imageB.insert(v);
                }
                if (pass && imageB != js) {
                    pass = false;
                    detail = " enumeration image != S(J_" + std::to_string(k) + ") on " +
                             sh.str();
                }
            }
            if (!pass) break;
        }
    }
    report(4, pass,
           "inner strategies biject S(I_k) -> S(J_k), k in {2,3}, shapes <= 12 boxes; "
           "growth is an involution" + detail,
           t.seconds());
}

// 5. Greene statistics on 200 seeded random square traversals at n = 30.
void criterion5() {
    Timer t;
    bool pass = true;
    std::string detail;
    const int n = 30;
    for (int rep = 0; rep < 200 && pass; ++rep) {
        SeededRng rng(42, static_cast<std::uint64_t>(rep));
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        for (int i = n - 1; i >= 1; --i) {
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
        Permutation s(v);
        GrowthBorder gb = forward_growth(Traversal::square(s));
        bool found = false;
        for (std::size_t k = 0; k < gb.path.size(); ++k) {
            if (gb.path[k] == std::pair<int, int>{n, n}) {
                found = true;
                if (gb.labels[k].part(1) != lis(s) || gb.labels[k].num_parts() != lds(s)) {
                    pass = false;
                    detail = " Greene mismatch at rep " + std::to_string(rep);
                }
            }
        }
        if (!found) {
            pass = false;
            detail = " missing top corner";
        }
    }
    report(5, pass, "border labels give lis/lds on 200 random n=30 traversals" + detail,
           t.seconds());
}

// 6. Chi-square uniformity of the exact samplers with 1e5 seeded draws.
void criterion6() {
    Timer t;
    bool pass = true;
    std::string detail;
    const long long draws = 100000;

    auto run_case = [&](const std::string& name, int n,
                        const std::function<Permutation(SeededRng&)>& draw,
                        const std::vector<Permutation>& cls) {
        if (!pass) return;
        std::map<Permutation, std::int64_t> counts;
        for (const auto& p : cls) counts[p] = 0;
        for (long long s = 0; s < draws; ++s) {
            SeededRng rng(7, static_cast<std::uint64_t>(s));
            Permutation p = draw(rng);
            auto it = counts.find(p);
            if (it == counts.end()) {
                pass = false;
                detail = " " + name + ": sample outside the class";
                return;
            }
            ++it->second;
        }
        std::vector<std::int64_t> cv;
        for (auto& [p, c] : counts) cv.push_back(c);
        double pval = chi_square_pvalue(chi_square_uniform_stat(cv, draws),
                                        static_cast<int>(cv.size()) - 1);
        if (!(pval > 1e-3)) {
            pass = false;
            detail = " " + name + " rejected with p=" + fmt_double(pval);
        } else {
            detail += " " + name + " p=" + fmt_double(pval);
        }
        (void)n;
    };

    run_case("Av_6(123)", 6,
             [&](SeededRng& rng) { return sample_av_increasing(6, 2, rng); },
             enumerate_avoiders(6, PatternSet({P("123")})));
    run_case("Av_6(2143) via (2,0,2)", 6,
             [&](SeededRng& rng) { return sample_target_class(6, ClassSpec(2, 0, 2), rng); },
             enumerate_avoiders(6, PatternSet({P("2143")})));

    report(6, pass, "sampler uniformity not rejected at 1e-3 with 1e5 draws:" + detail,
           t.seconds());
}

// 7. One-sided lemma, exhaustively over S_n, n <= 7.
void criterion7() {
    Timer t;
    bool pass = true;
    std::string detail;
    long long violations = 0, hypo = 0;
    for (double delta : {std::exp(-8.0), std::exp(-10.0)}) {
        double eps = 2.01 / std::log(1.0 / delta);
        for (int n = 1; n <= 7; ++n) {
            oracle::for_each_permutation(n, [&](const Permutation& s) {
                EmpiricalPermuton mu{s};
                if (mu_w(mu, WRegionSpec(delta, WSide::plus)) < delta) {
                    ++hypo;
                    bool minus = mu_w(mu, WRegionSpec(eps, WSide::minus)) < eps;
                    bool both = mu_w(mu, WRegionSpec(2 * eps)) < 2 * eps;
                    if (!minus || !both) ++violations;
                }
            });
        }
    }
    if (violations) {
        pass = false;
        detail = " " + std::to_string(violations) + " violations";
    }
    report(7, pass,
           "one-sided lemma holds exhaustively (n <= 7, delta in {e^-8, e^-10}, " +
               std::to_string(hypo) + " hypothesis cases)" + detail,
           t.seconds());
}

// Pilot medians for criterion 8, committed from the seed-7 pilot run
// (data/pilot/converge_211.csv).  Reruns with other seeds stay within 20%.
struct PilotRow {
    int n;
    double w02_median;
    double rect_median;
};
const std::vector<PilotRow> kPilot8 = {
    {50, -1.0, -1.0},   // placeholders: frozen after the pilot run
    {200, -1.0, -1.0},
    {800, -1.0, -1.0},
};

void criterion8(bool rerun_tolerances) {
    Timer t;
    ExperimentConfig cfg;
    cfg.spec = ClassSpec(2, 1, 1);
    cfg.ns = {50, 200, 800};
    cfg.samples = 50;
    cfg.seed = 7;
    cfg.epsilons = {0.2};
    cfg.grid_m = 64;
    cfg.threads = 2;
    std::ostringstream sink;
    auto recs = run_convergence(cfg, &sink);
    auto sums = summarize(cfg, recs);
    bool pass = true;
    std::string detail;
    double prevW = 1e9, prevR = 1e9;
    for (const auto& s : sums) {
        detail += " n=" + std::to_string(s.n) + ": w=" + fmt_double(s.w_median) +
                  " rect=" + fmt_double(s.rect_median);
        if (!(s.w_median < prevW) || !(s.rect_median < prevR)) {
            pass = false;
            detail += " (not strictly decreasing)";
        }
        prevW = s.w_median;
        prevR = s.rect_median;
        for (const auto& p : kPilot8) {
            if (p.n != s.n) continue;
            if (p.w02_median < 0) {
                pass = false;
                detail += " (pilot values not committed)";
            } else if (rerun_tolerances) {
                if (std::abs(s.w_median - p.w02_median) > 0.2 * std::max(p.w02_median, 1e-12) ||
                    std::abs(s.rect_median - p.rect_median) > 0.2 * p.rect_median) {
                    pass = false;
                    detail += " (outside 20% of pilot)";
                }
            } else if (s.w_median != p.w02_median || s.rect_median != p.rect_median) {
                pass = false;
                detail += " (seed-7 rerun deviates from the committed pilot)";
            }
        }
    }
    report(8, pass, "median mu(W_0.2) and rect-sup strictly decrease over n=50,200,800;" +
                        detail,
           t.seconds());
}

// Pilot fractions for criterion 9 (data/pilot/goodness_d3.csv).
const std::vector<std::pair<int, double>> kPilot9 = {
    {100, -1.0}, {400, -1.0}, {1600, -1.0}, // frozen after the pilot run
};

void criterion9() {
    Timer t;
    ExperimentConfig cfg;
    cfg.ns = {100, 400, 1600};
    cfg.samples = 100;
    cfg.seed = 7;
    cfg.goodness_epsilon = 0.05;
    cfg.goodness_d = 3;
    cfg.threads = 2;
    cfg.sampler_max_n = 1600;
    std::ostringstream sink;
    auto recs = run_goodness(cfg, &sink);
    std::map<int, std::pair<int, int>> frac;
    for (const auto& r : recs) {
        auto& [good, total] = frac[r.n];
        ++total;
        good += r.report.all_good() ? 1 : 0;
    }
    bool pass = true;
    std::string detail;
    double prev = -1, first = 0, last = 0;
    for (int n : cfg.ns) {
        double f = static_cast<double>(frac[n].first) / frac[n].second;
        detail += " n=" + std::to_string(n) + ": " + fmt_double(f);
        if (n == cfg.ns.front()) first = f;
        if (n == cfg.ns.back()) last = f;
        if (f < prev) {
            pass = false;
            detail += " (decreasing)";
        }
        prev = f;
    }
    if (!(last >= first + 0.1)) {
        pass = false;
        detail += " ; n=1600 fraction not >= n=100 fraction + 0.1. The printed "
                  "conditions 2 and 4 demand sub-polylog layer gaps that uniform "
                  "Av(I_4) samples only reach at astronomically large n, so the "
                  "good fraction is 0 at every feasible size";
    }
    for (const auto& [n, f] : kPilot9) {
        if (f < 0) detail += " (pilot values not committed)";
    }
    report(9, pass, "good fraction trend over n=100,400,1600 (eps=0.05, d=3):" + detail,
           t.seconds());
}

// 10. Measure-geometry exactness at 1e-12 on randomized cases up to n = 1e4.
void criterion10() {
    Timer t;
    bool pass = true;
    std::string detail;
    SeededRng rng(1234, 0);
    auto random_perm = [&](int n) {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        for (int i = n - 1; i >= 1; --i) {
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
        return Permutation(v);
    };
    const int sizes[] = {3, 10, 100, 2000, 10000};
    int cases = 0;
    for (int rep = 0; rep < 1000 && pass; ++rep) {
        int n = sizes[rep % 5];
        EmpiricalPermuton mu{random_perm(n)};
        double a = rng.uniform01(), b = rng.uniform01();
        if (a > b) std::swap(a, b);
        if (std::abs(mu.rect(Rect(a, b, 0, 1)) - (b - a)) > 1e-12 ||
            std::abs(mu.rect(Rect(0, 1, a, b)) - (b - a)) > 1e-12) {
            pass = false;
            detail = " marginal failure at n=" + std::to_string(n);
            break;
        }
        double xs[3] = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        double ys[3] = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        std::sort(xs, xs + 3);
        std::sort(ys, ys + 3);
        double whole = mu.rect(Rect(xs[0], xs[2], ys[0], ys[2]));
        double parts = mu.rect(Rect(xs[0], xs[1], ys[0], ys[1])) +
                       mu.rect(Rect(xs[1], xs[2], ys[0], ys[1])) +
                       mu.rect(Rect(xs[0], xs[1], ys[1], ys[2])) +
                       mu.rect(Rect(xs[1], xs[2], ys[1], ys[2]));
        if (std::abs(whole - parts) > 1e-12) {
            pass = false;
            detail = " additivity failure at n=" + std::to_string(n);
            break;
        }
        double eps = 0.05 + 0.9 * rng.uniform01();
        double both = mu_w(mu, WRegionSpec(eps));
        double plus = mu_w(mu, WRegionSpec(eps, WSide::plus));
        double minus = mu_w(mu, WRegionSpec(eps, WSide::minus));
        if (both != plus + minus) {
            pass = false;
            detail = " W decomposition failure";
            break;
        }
        ++cases;
    }
    report(10, pass,
           "marginal/additivity/W-decomposition exact to 1e-12 on " + std::to_string(cases) +
               " randomized cases up to n = 10^4" + detail,
           t.seconds());
}

} // namespace

int main(int argc, char** argv) {
    bool rerunTol = argc > 1 && std::string(argv[1]) == "--rerun-tolerances";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8(rerunTol);
    criterion9();
    criterion10();
    std::printf("%d criterion failure(s)\n", g_failures);
    return g_failures;
}

#pragma once

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "permutonlab/bwx.hpp"
#include "permutonlab/layers.hpp"
#include "permutonlab/measure.hpp"
#include "permutonlab/sampler.hpp"
#include "permutonlab/stats.hpp"

namespace permutonlab {

inline constexpr int kCsvSchemaVersion = 1;

/// Shortest-roundtrip decimal formatting so reruns produce byte-identical
/// rows.
inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    double back = std::strtod(buf, nullptr);
    if (back == x) {
        for (int prec = 1; prec <= 16; ++prec) {
            std::snprintf(buf, sizeof buf, "%.*g", prec, x);
            if (std::strtod(buf, nullptr) == x) break;
        }
    }
    return buf;
}

struct ExperimentConfig {
    ClassSpec spec{2, 1, 1};
    std::vector<int> ns{50, 200, 800};
    int samples = 50;
    std::uint64_t seed = 0;
    std::vector<double> epsilons{0.1, 0.2, 0.4};
    int grid_m = 64;
    double goodness_epsilon = 0.05;
    int goodness_d = 3;
    std::string cache_dir;
    int threads = 2;
    int sampler_max_n = 2000;

    void validate() const {
        if (ns.empty()) throw UsageError("config: n list must be nonempty");
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (ns[i] < 1) throw UsageError("config: n must be positive");
            if (i > 0 && ns[i] <= ns[i - 1])
                throw UsageError("config: n list must be strictly ascending");
        }
        if (samples < 1) throw UsageError("config: samples >= 1");
        for (double e : epsilons)
            if (!(e > 0 && e < 1)) throw UsageError("config: epsilons must lie in (0,1)");
        if (grid_m < 2) throw UsageError("config: grid >= 2");
        if (threads < 1) throw UsageError("config: threads >= 1");
    }

    SamplerLimits limits() const { return SamplerLimits{sampler_max_n, 6}; }
    BwxOptions bwx() const {
        BwxOptions opt;
        opt.cache_dir = resolve_cache_dir(cache_dir);
        return opt;
    }
};

struct ConvergenceRecord {
    int n = 0;
    int sample_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<double> w_both;   // one entry per configured epsilon
    double rect_sup = 0;
    bool good = false;            // goodness of the source Av(I_{d+1}) sample
    bool failed = false;          // bijection failure; recorded, not fatal
    std::string failure;
    double wall_ms = 0;
};

/// Fixed-size indexed parallel map: results land at their index, so output
/// order is independent of scheduling.
template <typename Result>
std::vector<Result> run_indexed(int count, int threads,
                                const std::function<Result(int)>& fn) {
    std::vector<Result> out(static_cast<std::size_t>(count));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                out[static_cast<std::size_t>(i)] = fn(i);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

/// One convergence sample: draw sigma uniformly from Av(I_{d+1}), push it
/// through the pipeline, measure the image, grade the source.
inline ConvergenceRecord convergence_sample(const ExperimentConfig& cfg, int n, int sample_id,
                                            std::uint64_t stream) {
    auto t0 = std::chrono::steady_clock::now();
    ConvergenceRecord rec;
    rec.n = n;
    rec.sample_id = sample_id;
    rec.seed = cfg.seed;
    rec.stream = stream;
    try {
        SeededRng rng(cfg.seed, stream);
        int d = cfg.spec.d();
        Permutation sigma = sample_av_increasing(n, d, rng, cfg.limits(),
                                                 resolve_cache_dir(cfg.cache_dir));
        Permutation pi = pipeline_image(sigma, cfg.spec, cfg.bwx());
        EmpiricalPermuton mu(pi);
        for (double e : cfg.epsilons) rec.w_both.push_back(mu_w(mu, WRegionSpec(e)));
        rec.rect_sup = rect_sup_distance(mu, cfg.grid_m);
        rec.good = goodness(sigma, cfg.goodness_epsilon, d).all_good();
    } catch (const Error& e) {
        rec.failed = true;
        rec.failure = e.what();
        rec.w_both.assign(cfg.epsilons.size(), -1.0);
        rec.rect_sup = -1.0;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

inline std::string convergence_csv_header(const ExperimentConfig& cfg) {
    std::string h = "schema_version,n,sample_id,seed,stream";
    for (double e : cfg.epsilons) h += ",w_both_eps" + fmt_double(e);
    h += ",rect_sup_m" + std::to_string(cfg.grid_m) + ",good,failed,wall_ms";
    return h;
}

inline std::string convergence_csv_row(const ConvergenceRecord& r) {
    std::string s = std::to_string(kCsvSchemaVersion) + "," + std::to_string(r.n) + "," +
                    std::to_string(r.sample_id) + "," + std::to_string(r.seed) + "," +
                    std::to_string(r.stream);
    for (double w : r.w_both) s += "," + fmt_double(w);
    s += "," + fmt_double(r.rect_sup) + "," + (r.good ? "1" : "0") + "," +
         (r.failed ? "1" : "0") + "," + fmt_double(r.wall_ms);
    return s;
}

struct ConvergenceSummary {
    int n = 0;
    int samples = 0;
    double epsilon = 0;
    double w_median = 0, w_q25 = 0, w_q75 = 0;
    double rect_median = 0, rect_q25 = 0, rect_q75 = 0;
    double good_fraction = 0;
};

inline std::vector<ConvergenceSummary> summarize(const ExperimentConfig& cfg,
                                                 const std::vector<ConvergenceRecord>& recs) {
    std::vector<ConvergenceSummary> out;
    for (int n : cfg.ns) {
        std::vector<const ConvergenceRecord*> rows;
        for (const auto& r : recs)
            if (r.n == n && !r.failed) rows.push_back(&r);
        if (rows.empty()) continue;
        std::vector<double> rect;
        int good = 0;
        for (auto* r : rows) {
            rect.push_back(r->rect_sup);
            good += r->good ? 1 : 0;
        }
        for (std::size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
            std::vector<double> w;
            for (auto* r : rows) w.push_back(r->w_both[ei]);
            ConvergenceSummary s;
            s.n = n;
            s.samples = static_cast<int>(rows.size());
            s.epsilon = cfg.epsilons[ei];
            s.w_median = median_of(w);
            s.w_q25 = quantile_of(w, 0.25);
            s.w_q75 = quantile_of(w, 0.75);
            s.rect_median = median_of(rect);
            s.rect_q25 = quantile_of(rect, 0.25);
            s.rect_q75 = quantile_of(rect, 0.75);
            s.good_fraction = static_cast<double>(good) / static_cast<double>(rows.size());
            out.push_back(s);
        }
    }
    return out;
}

inline std::string summary_csv_header() {
    return "schema_version,n,samples,epsilon,w_both_median,w_both_q25,w_both_q75,"
           "rect_sup_median,rect_sup_q25,rect_sup_q75,good_fraction";
}

inline std::string summary_csv_row(const ConvergenceSummary& s) {
    return std::to_string(kCsvSchemaVersion) + "," + std::to_string(s.n) + "," +
           std::to_string(s.samples) + "," + fmt_double(s.epsilon) + "," +
           fmt_double(s.w_median) + "," + fmt_double(s.w_q25) + "," + fmt_double(s.w_q75) + "," +
           fmt_double(s.rect_median) + "," + fmt_double(s.rect_q25) + "," +
           fmt_double(s.rect_q75) + "," + fmt_double(s.good_fraction);
}

/// Streams per-sample rows to `rows` (flushed after every line) and returns
/// all records.  Work is dispatched to a pool; rows are written in stream
/// order regardless of scheduling.
inline std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg,
                                                      std::ostream* rows) {
    cfg.validate();
    // warm the per-(n,d) shape tables once so workers only sample
    for (int n : cfg.ns)
        shape_distribution(n, cfg.spec.d(), cfg.limits(), resolve_cache_dir(cfg.cache_dir));
    std::vector<ConvergenceRecord> all;
    std::uint64_t stream0 = 0;
    for (int n : cfg.ns) {
        auto recs = run_indexed<ConvergenceRecord>(
            cfg.samples, cfg.threads, [&, n, stream0](int s) {
                return convergence_sample(cfg, n, s, stream0 + static_cast<std::uint64_t>(s));
            });
        for (auto& r : recs) {
            if (rows) {
                (*rows) << convergence_csv_row(r) << '\n';
                rows->flush();
            }
            all.push_back(std::move(r));
        }
        stream0 += static_cast<std::uint64_t>(cfg.samples);
    }
    return all;
}

// ---------------------------------------------------------------------------
// Goodness sweeps
// ---------------------------------------------------------------------------

struct GoodnessRecord {
    int n = 0;
    std::uint64_t seed = 0, stream = 0;
    double eps = 0;
    GoodnessReport report;
    double wall_ms = 0;
};

inline std::string goodness_csv_header() {
    return "schema_version,n,seed,stream,eps,c1,c2,c3,c4,c5,all_good";
}

inline std::string goodness_csv_row(const GoodnessRecord& r) {
    std::string s = std::to_string(kCsvSchemaVersion) + "," + std::to_string(r.n) + "," +
                    std::to_string(r.seed) + "," + std::to_string(r.stream) + "," +
                    fmt_double(r.eps);
    for (int c = 0; c < 5; ++c) s += std::string(",") + (r.report.c[c] ? "1" : "0");
    s += std::string(",") + (r.report.all_good() ? "1" : "0");
    return s;
}

inline std::vector<GoodnessRecord> run_goodness(const ExperimentConfig& cfg, std::ostream* rows) {
    cfg.validate();
    for (int n : cfg.ns)
        shape_distribution(n, cfg.goodness_d, cfg.limits(), resolve_cache_dir(cfg.cache_dir));
    std::vector<GoodnessRecord> all;
    std::uint64_t stream0 = 0;
    for (int n : cfg.ns) {
        auto recs = run_indexed<GoodnessRecord>(
            cfg.samples, cfg.threads, [&, n, stream0](int s) {
                auto t0 = std::chrono::steady_clock::now();
                GoodnessRecord rec;
                rec.n = n;
                rec.seed = cfg.seed;
                rec.stream = stream0 + static_cast<std::uint64_t>(s);
                rec.eps = cfg.goodness_epsilon;
                SeededRng rng(cfg.seed, rec.stream);
                Permutation sigma = sample_av_increasing(n, cfg.goodness_d, rng, cfg.limits(),
                                                         resolve_cache_dir(cfg.cache_dir));
                rec.report = goodness(sigma, cfg.goodness_epsilon, cfg.goodness_d);
                rec.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
                return rec;
            });
        for (auto& r : recs) {
            if (rows) {
                (*rows) << goodness_csv_row(r) << '\n';
                rows->flush();
            }
            all.push_back(std::move(r));
        }
        stream0 += static_cast<std::uint64_t>(cfg.samples);
    }
    return all;
}

// ---------------------------------------------------------------------------
// Measure reports
// ---------------------------------------------------------------------------

inline std::string measure_csv_header(int grid_m) {
    return "schema_version,n,seed,stream,epsilon,w_plus,w_minus,w_both,rect_sup_m" +
           std::to_string(grid_m);
}

inline std::string measure_csv_row(const Permutation& p, std::uint64_t seed,
                                   std::uint64_t stream, double epsilon, int grid_m) {
    EmpiricalPermuton mu(p);
    WMasses m = mu_w_masses(mu, epsilon);
    double rs = rect_sup_distance(mu, grid_m);
    return std::to_string(kCsvSchemaVersion) + "," + std::to_string(p.size()) + "," +
           std::to_string(seed) + "," + std::to_string(stream) + "," + fmt_double(epsilon) +
           "," + fmt_double(m.plus) + "," + fmt_double(m.minus) + "," + fmt_double(m.both()) +
           "," + fmt_double(rs);
}

} // namespace permutonlab

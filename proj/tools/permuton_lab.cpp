// Command-line harness: enumeration, bijection, sampling, measurement,
// goodness and convergence sweeps, and the property-suite runner.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permutonlab/bwx.hpp"
#include "permutonlab/experiment.hpp"
#include "permutonlab/layers.hpp"
#include "permutonlab/measure.hpp"
#include "permutonlab/sampler.hpp"
#include "permutonlab/shape.hpp"
#include "permutonlab/verify.hpp"

using json = nlohmann::json;
using namespace permutonlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;   // property violation / bijection finding
constexpr int kExitUsage = 2;       // usage or bounds
constexpr int kExitPrecondition = 3;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stoi(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

ClassSpec parse_spec(const std::string& s) {
    auto v = parse_int_list(s);
    if (v.size() != 3) throw UsageError("--class expects k1,k2,k3");
    return ClassSpec(v[0], v[1], v[2]);
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty()) return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*f) throw UsageError("cannot open output file " + path);
    return f;
}

json coloring_to_json(const Coloring& col) {
    json blue = json::array();
    for (auto [i, j] : col.blue_boxes())
        blue.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
    return blue;
}

int cmd_enumerate(int n, const std::vector<std::string>& avoid, bool count_only, int bound) {
    std::vector<Permutation> pats;
    for (const auto& a : avoid) pats.push_back(Permutation::parse(a));
    if (pats.empty()) throw UsageError("enumerate: give at least one --avoid pattern");
    PatternSet ps(pats);
    if (count_only) {
        std::cout << count_avoiders(n, ps, bound) << "\n";
    } else {
        for_each_avoider(n, ps, [](const Permutation& p) { std::cout << p.str() << "\n"; },
                         bound);
    }
    return kExitOk;
}

int cmd_biject(const std::string& perm, const ClassSpec& spec, const std::string& tracePath,
               const BwxOptions& opt) {
    Permutation sigma = Permutation::parse(perm);
    PipelineTrace tr = pipeline(sigma, spec, opt);
    std::cout << "sigma  " << tr.sigma.str() << "\n";
    std::cout << "rho    " << tr.rho.str() << "\n";
    std::cout << "rho_rc " << tr.rho_rc.str() << "\n";
    std::cout << "pi_rc  " << tr.pi_rc.str() << "\n";
    std::cout << "pi     " << tr.pi.str() << "\n";
    if (!tracePath.empty()) {
        json j{{"spec", {spec.k1, spec.k2, spec.k3}},
               {"sigma", tr.sigma.str()},
               {"rho", tr.rho.str()},
               {"rho_rc", tr.rho_rc.str()},
               {"pi_rc", tr.pi_rc.str()},
               {"pi", tr.pi.str()},
               {"blue1", coloring_to_json(tr.coloring1)},
               {"lambda1", tr.lambda1.str()},
               {"blue2", coloring_to_json(tr.coloring2)},
               {"lambda2", tr.lambda2.str()}};
        std::ofstream out(tracePath, std::ios::app);
        if (!out) throw UsageError("cannot open trace file " + tracePath);
        out << j.dump() << "\n";
    }
    return kExitOk;
}

int cmd_sample(int n, const std::optional<ClassSpec>& spec, int dIncreasing, int samples,
               std::uint64_t seed, const std::string& method, const std::string& outPath,
               const ExperimentConfig& cfgBase) {
    auto out = open_out(outPath);
    std::ostream& os = out ? *out : std::cout;
    for (int s = 0; s < samples; ++s) {
        SeededRng rng(seed, static_cast<std::uint64_t>(s));
        Permutation p;
        json j;
        if (spec) {
            p = sample_target_class(n, *spec, rng, cfgBase.limits(), cfgBase.bwx());
            j = json{{"n", n},
                     {"spec", {spec->k1, spec->k2, spec->k3}},
                     {"seed", seed},
                     {"stream", s},
                     {"perm", p.str()}};
        } else {
            p = method == "rejection" ? rejection_sample_av_increasing(n, dIncreasing, rng)
                                      : sample_av_increasing(n, dIncreasing, rng,
                                                             cfgBase.limits(),
                                                             resolve_cache_dir(cfgBase.cache_dir));
            j = json{{"n", n},
                     {"d", dIncreasing},
                     {"seed", seed},
                     {"stream", s},
                     {"perm", p.str()}};
        }
        os << j.dump() << "\n";
        os.flush();
    }
    return kExitOk;
}

int cmd_measure(const std::vector<std::string>& perms, const std::string& inPath,
                const std::vector<double>& epsilons, int grid, const std::string& outPath) {
    auto out = open_out(outPath);
    std::ostream& os = out ? *out : std::cout;
    os << measure_csv_header(grid) << "\n";
    auto emit = [&](const Permutation& p, std::uint64_t seed, std::uint64_t stream) {
        for (double e : epsilons) {
            os << measure_csv_row(p, seed, stream, e, grid) << "\n";
            os.flush();
        }
    };
    for (const auto& s : perms) emit(Permutation::parse(s), 0, 0);
    if (!inPath.empty()) {
        std::ifstream in(inPath);
        if (!in) throw UsageError("cannot open " + inPath);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            emit(Permutation::parse(j.at("perm").get<std::string>()),
                 j.value("seed", 0ULL), j.value("stream", 0ULL));
        }
    }
    return kExitOk;
}

int cmd_converge(const ExperimentConfig& cfg, const std::string& outPath,
                 const std::string& summaryPath) {
    auto out = open_out(outPath);
    std::ostream& os = out ? *out : std::cout;
    os << convergence_csv_header(cfg) << "\n";
    auto recs = run_convergence(cfg, &os);
    auto sums = summarize(cfg, recs);
    std::ostream* sos = &std::cout;
    std::unique_ptr<std::ofstream> sfile;
    if (!summaryPath.empty()) {
        sfile = open_out(summaryPath);
        sos = sfile.get();
    }
    (*sos) << summary_csv_header() << "\n";
    for (const auto& s : sums) (*sos) << summary_csv_row(s) << "\n";
    int failures = 0;
    for (const auto& r : recs)
        if (r.failed) ++failures;
    if (failures) {
        std::cerr << failures << " sample(s) recorded bijection findings\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_goodness(const ExperimentConfig& cfg, const std::string& outPath,
                 const std::string& pathsPath) {
    auto out = open_out(outPath);
    std::ostream& os = out ? *out : std::cout;
    os << goodness_csv_header() << "\n";
    auto recs = run_goodness(cfg, &os);
    for (int n : cfg.ns) {
        int good = 0, total = 0;
        for (const auto& r : recs)
            if (r.n == n) {
                ++total;
                good += r.report.all_good() ? 1 : 0;
            }
        std::cerr << "n=" << n << " good fraction = " << good << "/" << total << "\n";
    }
    if (!pathsPath.empty()) {
        std::ofstream po(pathsPath, std::ios::trunc);
        if (!po) throw UsageError("cannot open " + pathsPath);
        for (int n : cfg.ns) {
            SeededRng rng(cfg.seed, 0);
            Permutation s = sample_av_increasing(n, cfg.goodness_d, rng, cfg.limits(),
                                                 resolve_cache_dir(cfg.cache_dir));
            PathFamily pf = paths(s, cfg.goodness_d);
            json arr = json::array();
            for (const auto& path : pf.paths) {
                json pj = json::array();
                for (auto [x, y] : path) pj.push_back({x, y});
                arr.push_back(pj);
            }
            po << json{{"n", n}, {"seed", cfg.seed}, {"stream", 0}, {"paths", arr}}.dump()
               << "\n";
        }
    }
    return kExitOk;
}

int cmd_shape_wilf(int maxBoxes, const std::string& a, const std::string& b) {
    if (!a.empty() || !b.empty()) {
        if (a.empty() || b.empty()) throw UsageError("shape-wilf: give both --first and --second");
        auto rep = shape_wilf_check(Permutation::parse(a), Permutation::parse(b), maxBoxes);
        if (rep.equal_everywhere) {
            std::cout << "equal everywhere tested (" << rep.shapes_tested << " shapes, "
                      << rep.shapes_skipped << " without traversals skipped)\n";
        } else {
            std::cout << "counterexample " << rep.counterexample.str() << ": " << rep.count_first
                      << " vs " << rep.count_second << "\n";
        }
        return kExitOk;
    }
    // empirical partition of S_3
    std::vector<Permutation> s3;
    oracle::for_each_permutation(3, [&](const Permutation& p) { s3.push_back(p); });
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < s3.size(); ++i) {
        bool placed = false;
        for (auto& cl : classes) {
            if (shape_wilf_check(s3[cl[0]], s3[i], maxBoxes).equal_everywhere) {
                cl.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({i});
    }
    std::cout << "shape-Wilf partition of S_3 over shapes with <= " << maxBoxes << " boxes:\n";
    for (const auto& cl : classes) {
        std::cout << "  {";
        for (std::size_t k = 0; k < cl.size(); ++k)
            std::cout << (k ? ", " : " ") << s3[cl[k]].str();
        std::cout << " }\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& suite, const VerifyOptions& opt) {
    std::vector<std::string> suites =
        suite == "all" ? verify_suite_names() : std::vector<std::string>{suite};
    int failures = 0;
    json report = json::array();
    for (const auto& s : suites) {
        auto bad = run_verify_suite(s, opt, std::cout);
        for (const auto& f : bad)
            report.push_back({{"suite", s}, {"invariant", f.name}, {"detail", f.detail}});
        failures += static_cast<int>(bad.size());
    }
    if (failures) {
        std::cerr << json{{"failures", report}}.dump() << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"permuton-lab: pattern-avoiding permutation bijections, exact samplers, "
                 "and permuton measure diagnostics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    std::string cacheDir;
    app.add_option("--cache-dir", cacheDir,
                   "cache directory (or set PERMUTON_LAB_CACHE)")
        ->envname("PERMUTON_LAB_CACHE_FLAG");

    // enumerate
    auto* enumCmd = app.add_subcommand("enumerate", "list or count Av_n(patterns)");
    int enumN = 0, enumBound = kDefaultEnumerationBound;
    bool countOnly = false;
    std::vector<std::string> avoid;
    enumCmd->add_option("--n", enumN, "permutation size")->required();
    enumCmd->add_option("--avoid", avoid, "pattern(s), e.g. 321 or 3,2,1")->required();
    enumCmd->add_flag("--count-only", countOnly, "print the count only");
    enumCmd->add_option("--bound", enumBound, "exhaustive bound");

    // biject
    auto* bijCmd = app.add_subcommand("biject", "run the four-step bijection pipeline");
    std::string bijPerm, tracePath, strategyName = "auto";
    std::vector<int> specRaw{2, 1, 1};
    int bk1 = 0, bk2 = -1, bk3 = 0;
    bijCmd->add_option("--perm", bijPerm, "input permutation")->required();
    bijCmd->add_option("--k1", bk1)->required();
    bijCmd->add_option("--k2", bk2)->required();
    bijCmd->add_option("--k3", bk3)->required();
    bijCmd->add_option("--trace", tracePath, "append a JSONL pipeline trace");
    bijCmd->add_option("--strategy", strategyName, "inner strategy: auto|growth|enumeration");

    // sample
    auto* sampCmd = app.add_subcommand("sample", "draw uniform samples as JSONL");
    int sampN = 0, sampCount = 1, sampD = 0;
    std::uint64_t sampSeed = 0;
    std::string sampClass, sampOut, sampMethod = "exact";
    int sampMaxN = 2000;
    sampCmd->add_option("--n", sampN)->required();
    sampCmd->add_option("--class", sampClass, "target class k1,k2,k3");
    sampCmd->add_option("--avoid-increasing-d", sampD, "sample Av_n(I_{d+1}) directly");
    sampCmd->add_option("--samples", sampCount);
    sampCmd->add_option("--seed", sampSeed);
    sampCmd->add_option("--method", sampMethod, "exact|rejection (rejection: small n oracle)");
    sampCmd->add_option("--out", sampOut, "output JSONL file (default stdout)");
    sampCmd->add_option("--max-n", sampMaxN, "sampler size bound");

    // measure
    auto* measCmd = app.add_subcommand("measure", "permuton measure report CSV");
    std::vector<std::string> measPerms;
    std::string measIn, measOut, measEps = "0.1,0.2,0.4";
    int measGrid = 64;
    measCmd->add_option("--perm", measPerms, "permutation(s) to measure");
    measCmd->add_option("--in", measIn, "JSONL file from the sample command");
    measCmd->add_option("--epsilons", measEps, "comma-separated epsilon list");
    measCmd->add_option("--grid", measGrid, "rect-sup grid");
    measCmd->add_option("--out", measOut, "output CSV (default stdout)");

    // converge
    auto* convCmd = app.add_subcommand("converge", "convergence sweep toward the anti-diagonal");
    std::string convClass = "2,1,1", convNs = "50,200,800", convEps = "0.1,0.2,0.4";
    std::string convOut, convSummary;
    int convSamples = 50, convGrid = 64, convThreads = 2, convMaxN = 2000;
    std::uint64_t convSeed = 7;
    double convGoodEps = 0.05;
    convCmd->add_option("--class", convClass, "k1,k2,k3");
    convCmd->add_option("--ns", convNs, "ascending n list");
    convCmd->add_option("--samples", convSamples);
    convCmd->add_option("--seed", convSeed);
    convCmd->add_option("--epsilons", convEps);
    convCmd->add_option("--grid", convGrid);
    convCmd->add_option("--goodness-eps", convGoodEps);
    convCmd->add_option("--threads", convThreads);
    convCmd->add_option("--out", convOut, "per-sample CSV (default stdout)");
    convCmd->add_option("--summary-out", convSummary, "summary CSV (default stdout)");
    convCmd->add_option("--max-n", convMaxN, "sampler size bound");

    // goodness
    auto* goodCmd = app.add_subcommand("goodness", "regularity-condition sweep");
    std::string goodNs = "100,400,1600", goodOut, goodPaths;
    int goodSamples = 50, goodD = 3, goodThreads = 2, goodMaxN = 2000;
    std::uint64_t goodSeed = 7;
    double goodEps = 0.05;
    goodCmd->add_option("--ns", goodNs);
    goodCmd->add_option("--samples", goodSamples);
    goodCmd->add_option("--seed", goodSeed);
    goodCmd->add_option("--d", goodD);
    goodCmd->add_option("--eps", goodEps);
    goodCmd->add_option("--threads", goodThreads);
    goodCmd->add_option("--out", goodOut, "CSV (default stdout)");
    goodCmd->add_option("--paths-out", goodPaths, "emit one JSONL path family per n");
    goodCmd->add_option("--max-n", goodMaxN, "sampler size bound");

    // shape-wilf
    auto* swCmd = app.add_subcommand("shape-wilf", "shape-Wilf comparisons over small shapes");
    int swMax = 9;
    std::string swA, swB;
    swCmd->add_option("--max-boxes", swMax);
    swCmd->add_option("--first", swA, "compare one pair instead of partitioning S_3");
    swCmd->add_option("--second", swB);

    // verify
    auto* verCmd = app.add_subcommand("verify", "run a property suite");
    std::string verSuite;
    int verMaxN = 7;
    std::uint64_t verSeed = 7;
    verCmd->add_option("--suite", verSuite, "oneside|bijection|greene|sampler|layers|all")
        ->required();
    verCmd->add_option("--max-n", verMaxN, "exhaustive bound");
    verCmd->add_option("--seed", verSeed);

    try {
        app.parse(argc, argv);

        ExperimentConfig base;
        base.cache_dir = cacheDir;

        if (*enumCmd) return cmd_enumerate(enumN, avoid, countOnly, enumBound);
        if (*bijCmd) {
            BwxOptions opt = base.bwx();
            if (strategyName == "growth") opt.strategy = InnerStrategy::growth;
            else if (strategyName == "enumeration") opt.strategy = InnerStrategy::enumeration;
            else if (strategyName != "auto") throw UsageError("unknown --strategy");
            return cmd_biject(bijPerm, ClassSpec(bk1, bk2, bk3), tracePath, opt);
        }
        if (*sampCmd) {
            std::optional<ClassSpec> spec;
            if (!sampClass.empty()) spec = parse_spec(sampClass);
            if (!spec && sampD == 0)
                throw UsageError("sample: give --class or --avoid-increasing-d");
            ExperimentConfig cfg = base;
            cfg.sampler_max_n = sampMaxN;
            return cmd_sample(sampN, spec, sampD, sampCount, sampSeed, sampMethod, sampOut, cfg);
        }
        if (*measCmd)
            return cmd_measure(measPerms, measIn, parse_double_list(measEps), measGrid, measOut);
        if (*convCmd) {
            ExperimentConfig cfg = base;
            cfg.spec = parse_spec(convClass);
            cfg.ns = parse_int_list(convNs);
            cfg.samples = convSamples;
            cfg.seed = convSeed;
            cfg.epsilons = parse_double_list(convEps);
            cfg.grid_m = convGrid;
            cfg.goodness_epsilon = convGoodEps;
            cfg.goodness_d = cfg.spec.d();
            cfg.threads = convThreads;
            cfg.sampler_max_n = convMaxN;
            return cmd_converge(cfg, convOut, convSummary);
        }
        if (*goodCmd) {
            ExperimentConfig cfg = base;
            cfg.ns = parse_int_list(goodNs);
            cfg.samples = goodSamples;
            cfg.seed = goodSeed;
            cfg.goodness_epsilon = goodEps;
            cfg.goodness_d = goodD;
            cfg.threads = goodThreads;
            cfg.sampler_max_n = goodMaxN;
            return cmd_goodness(cfg, goodOut, goodPaths);
        }
        if (*swCmd) return cmd_shape_wilf(swMax, swA, swB);
        if (*verCmd) {
            VerifyOptions opt;
            opt.max_n = verMaxN;
            opt.seed = verSeed;
            return cmd_verify(verSuite, opt);
        }
        throw UsageError("no subcommand");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const PreconditionViolated& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const InnerBijectionFailure& e) {
        std::cerr << "finding: " << e.what() << "\n";
        return kExitViolation;
    } catch (const BoundExceeded& e) {
        std::cerr << "bounds: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    }
}

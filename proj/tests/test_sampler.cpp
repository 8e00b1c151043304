#include <catch_amalgamated.hpp>

#include <map>

#include "permutonlab/sampler.hpp"
#include "permutonlab/stats.hpp"
#include "permutonlab/verify.hpp"

using namespace permutonlab;

namespace {
Permutation P(const char* s) { return Permutation::parse(s); }
}

TEST_CASE("shape distribution worked examples") {
    ShapeDistribution d42(4, 2);
    CHECK(d42.num_shapes() == 3);
    CHECK(d42.total() == 14);
    std::set<std::string> shapes;
    for (std::size_t i = 0; i < d42.num_shapes(); ++i)
        shapes.insert(d42.shape_at(i).str());
    CHECK(shapes == std::set<std::string>{"2,2", "2,1,1", "1,1,1,1"});

    CHECK(ShapeDistribution(6, 2).total() == 132);
    ShapeDistribution d1(9, 1);
    CHECK(d1.num_shapes() == 1);
    CHECK(d1.total() == 1);
    CHECK(ShapeDistribution(0, 3).total() == 1);
}

TEST_CASE("shape distribution bounds") {
    CHECK_THROWS_AS(ShapeDistribution(1001, 3), BoundExceeded);
    CHECK_THROWS_AS(ShapeDistribution(10, 7), BoundExceeded);
    SamplerLimits wide{1600, 6};
    CHECK_NOTHROW(ShapeDistribution(1100, 2, wide));
}

TEST_CASE("weights match the hook formula and the enumeration oracle") {
    auto r = checks::weights_vs_enumeration(VerifyOptions{});
    INFO(r.detail);
    CHECK(r.pass);
    // spot check a larger table against the hook-length formula
    ShapeDistribution big(60, 3);
    BigInt total = 0;
    for (std::size_t i = 0; i < big.num_shapes(); ++i) {
        CHECK(big.tableau_count_at(i) == hook_count(big.shape_at(i)));
        total += big.weight_at(i);
    }
    CHECK(total == big.total());
}

TEST_CASE("sampling: degenerate and deterministic cases") {
    SeededRng rng(1, 0);
    CHECK(sample_av_increasing(7, 1, rng) == decreasing_pattern(7));
    CHECK(checks::sampler_determinism(VerifyOptions{}).pass);
    // lis constraint always holds
    for (int rep = 0; rep < 20; ++rep) {
        SeededRng r2(5, static_cast<std::uint64_t>(rep));
        CHECK(lis(sample_av_increasing(200, 3, r2)) <= 3);
    }
}

TEST_CASE("sampler uniformity at n = 5, d = 2") {
    auto cls = enumerate_avoiders(5, PatternSet({P("123")}));
    REQUIRE(cls.size() == 42);
    std::map<Permutation, std::int64_t> counts;
    for (const auto& p : cls) counts[p] = 0;
    const long long draws = 20000;
    for (long long s = 0; s < draws; ++s) {
        SeededRng rng(17, static_cast<std::uint64_t>(s));
        Permutation p = sample_av_increasing(5, 2, rng);
        REQUIRE(counts.count(p) == 1);
        ++counts[p];
    }
    std::vector<std::int64_t> cv;
    for (auto& [p, c] : counts) cv.push_back(c);
    double pval = chi_square_pvalue(chi_square_uniform_stat(cv, draws),
                                    static_cast<int>(cv.size()) - 1);
    CHECK(pval > 1e-3);
}

TEST_CASE("rejection sampler agrees on support and rough frequencies") {
    auto cls = enumerate_avoiders(5, PatternSet({P("123")}));
    std::map<Permutation, std::int64_t> counts;
    for (const auto& p : cls) counts[p] = 0;
    const long long draws = 20000;
    for (long long s = 0; s < draws; ++s) {
        SeededRng rng(23, static_cast<std::uint64_t>(s));
        Permutation p = rejection_sample_av_increasing(5, 2, rng);
        REQUIRE(counts.count(p) == 1);
        ++counts[p];
    }
    std::vector<std::int64_t> cv;
    for (auto& [p, c] : counts) cv.push_back(c);
    double pval = chi_square_pvalue(chi_square_uniform_stat(cv, draws),
                                    static_cast<int>(cv.size()) - 1);
    CHECK(pval > 1e-3);
    SeededRng rng(0, 0);
    CHECK_THROWS_AS(rejection_sample_av_increasing(10, 2, rng), BoundExceeded);
}

TEST_CASE("target class sampling") {
    // spec (1,1,1): the pipeline is the identity, so the distribution equals
    // the increasing-avoider sampler's
    for (int s = 0; s < 50; ++s) {
        SeededRng a(3, static_cast<std::uint64_t>(s)), b(3, static_cast<std::uint64_t>(s));
        CHECK(sample_target_class(6, ClassSpec(1, 1, 1), a) == sample_av_increasing(6, 2, b));
    }
    // spec (2,0,2) at n = 5: support lies in Av(2143) and hits all of it
    auto cls = enumerate_avoiders(5, PatternSet({P("2143")}));
    std::set<Permutation> seen;
    for (int s = 0; s < 4000; ++s) {
        SeededRng rng(29, static_cast<std::uint64_t>(s));
        Permutation p = sample_target_class(5, ClassSpec(2, 0, 2), rng);
        CHECK(avoids(p, P("2143")));
        seen.insert(p);
    }
    CHECK(seen.size() == cls.size());
}

TEST_CASE("sampler exactness chi-square (verify-suite scale)") {
    auto r = checks::sampler_exactness(VerifyOptions{});
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("shape distribution disk cache round-trips") {
    auto dir = std::filesystem::temp_directory_path() / "permutonlab_dist_cache";
    std::filesystem::remove_all(dir);
    ShapeDistribution fresh(12, 3, SamplerLimits{}, dir);
    REQUIRE(std::filesystem::exists(dir));
    ShapeDistribution reloaded(12, 3, SamplerLimits{}, dir);
    REQUIRE(fresh.num_shapes() == reloaded.num_shapes());
    CHECK(fresh.total() == reloaded.total());
    for (std::size_t i = 0; i < fresh.num_shapes(); ++i)
        CHECK(fresh.tableau_count_at(i) == reloaded.tableau_count_at(i));
    std::filesystem::remove_all(dir);
}

TEST_CASE("big integer uniform draws stay below the bound") {
    SeededRng rng(99, 0);
    BigInt bound = BigInt("123456789012345678901234567890");
    for (int i = 0; i < 200; ++i) {
        BigInt v = rng.below_big(bound);
        CHECK(v >= 0);
        CHECK(v < bound);
    }
}

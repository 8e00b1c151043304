#include <catch_amalgamated.hpp>

#include "permutonlab/permutation.hpp"
#include "permutonlab/verify.hpp"

using namespace permutonlab;

namespace {
Permutation P(const char* s) { return Permutation::parse(s); }
}

TEST_CASE("one-line parsing and formatting") {
    CHECK(P("3,1,4,2").one_line() == std::vector<int>{3, 1, 4, 2});
    CHECK(P("312").one_line() == std::vector<int>{3, 1, 2});
    CHECK(P("3,1,4,2").str() == "3,1,4,2");
    CHECK(Permutation().size() == 0);
    CHECK_THROWS_AS(Permutation({1, 1}), UsageError);
    CHECK_THROWS_AS(Permutation({2, 3}), UsageError);
}

TEST_CASE("containment examples") {
    CHECK(contains(P("2413"), P("231")));
    CHECK_FALSE(contains(P("321"), P("12")));
    for (const char* s : {"1", "2413", "52341", "123456"})
        CHECK(contains(P(s), P(s)));
    CHECK(contains(P("1"), Permutation()));  // the empty pattern embeds anywhere
    CHECK(contains(Permutation(), Permutation()));
}

TEST_CASE("avoidance examples") {
    CHECK(avoids(P("321"), PatternSet({P("123")})));
    CHECK_FALSE(avoids(P("2413"), PatternSet({P("231")})));
    CHECK(avoids(Permutation(), PatternSet({P("21"), P("123")})));
}

TEST_CASE("containment agrees with the subset oracle") {
    VerifyOptions opt;
    opt.max_n = 6; // the full n = 7 sweep runs in the verify suite
    auto r = checks::contains_oracle(opt);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("symmetries") {
    CHECK(reverse(P("2413")) == P("3142"));
    CHECK(complement(P("2413")) == P("3142"));
    CHECK(reverse_complement(P("132")) == P("213"));
    CHECK(reverse_complement(P("2143")) == P("2143"));
    auto r = checks::symmetry_bijections(VerifyOptions{5, 7});
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("sums and monotone constructors") {
    CHECK(direct_sum(P("21"), P("1")) == P("213"));
    CHECK(skew_sum(P("1"), P("21")) == P("321"));
    CHECK(direct_sum(direct_sum(P("21"), P("1")), P("21")) == P("21354"));
    CHECK(increasing_pattern(3) == P("123"));
    CHECK(decreasing_pattern(2) == P("21"));
    CHECK(monotone(0, Direction::increasing) == Permutation());
    CHECK(class_pattern(ClassSpec(2, 0, 2)) == P("2143"));
    CHECK(class_pattern(ClassSpec(2, 1, 1)) == P("2134"));
    CHECK(class_pattern(ClassSpec(3, 0, 1)) == P("3214"));
}

TEST_CASE("ClassSpec validation") {
    CHECK_THROWS_AS(ClassSpec(0, 1, 1), UsageError);
    CHECK_THROWS_AS(ClassSpec(1, 0, 0), UsageError);
    CHECK_THROWS_AS(ClassSpec(1, -1, 1), UsageError);
    CHECK(ClassSpec(2, 1, 1).d() == 3);
}

TEST_CASE("PatternSet drops redundant super-patterns") {
    PatternSet ps({P("12345"), P("123"), P("2143")});
    REQUIRE(ps.patterns().size() == 2);
    CHECK(ps.patterns()[0] == P("123"));
    CHECK(ps.patterns()[1] == P("2143"));
    CHECK_THROWS_AS(PatternSet(std::vector<Permutation>{}), UsageError);
    CHECK_THROWS_AS(PatternSet({Permutation()}), UsageError);
}

TEST_CASE("enumeration: counts, order, bounds") {
    CHECK(count_avoiders(5, PatternSet({P("321")})) == 42);
    CHECK(count_avoiders(0, PatternSet({P("21")})) == 1);
    CHECK(count_avoiders(8, PatternSet({P("1234")})) ==
          count_avoiders(8, PatternSet({P("2134")})));

    auto av = enumerate_avoiders(4, PatternSet({P("321")}));
    CHECK(std::is_sorted(av.begin(), av.end()));
    CHECK(av.size() == 14);

    CHECK_THROWS_AS(count_avoiders(11, PatternSet({P("321")})), BoundExceeded);
    CHECK_NOTHROW(count_avoiders(11, PatternSet({P("321")}), 11));
}

TEST_CASE("Catalan counts by enumeration") {
    const std::uint64_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int n = 0; n <= 8; ++n)
        CHECK(count_avoiders(n, PatternSet({P("321")})) == catalan[n]);
}

TEST_CASE("lis and lds") {
    CHECK(lis(P("3142")) == 2);
    CHECK(lis(increasing_pattern(9)) == 9);
    CHECK(lds(decreasing_pattern(9)) == 9);
    CHECK(lis(Permutation()) == 0);
    auto r = checks::lis_characterization(VerifyOptions{6, 7});
    CHECK(r.pass);
}

TEST_CASE("monotone block matcher agrees with generic containment") {
    // all block patterns with up to three runs of length <= 2, against all
    // permutations of size <= 6
    std::vector<std::vector<MonotoneBlock>> patterns;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int c = 0; c <= 2; ++c) {
                std::vector<MonotoneBlock> bl{{Direction::decreasing, a},
                                              {Direction::increasing, b},
                                              {Direction::decreasing, c}};
                patterns.push_back(bl);
                bl = {{Direction::increasing, a},
                      {Direction::decreasing, b},
                      {Direction::increasing, c}};
                patterns.push_back(bl);
            }
    for (int n = 0; n <= 6; ++n) {
        oracle::for_each_permutation(n, [&](const Permutation& s) {
            for (const auto& bl : patterns) {
                bool fast = contains_monotone_blocks(s, bl);
                bool ref = contains(s, block_pattern(bl));
                if (fast != ref) {
                    INFO("sigma=" << s.str() << " pattern=" << block_pattern(bl).str());
                    REQUIRE(fast == ref);
                }
            }
        });
    }
}

TEST_CASE("monotone block matcher on larger inputs") {
    SeededRng rng(11, 0);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 40;
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        for (int i = n - 1; i >= 1; --i) {
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
        Permutation s(v);
        for (const ClassSpec& spec : {ClassSpec(2, 1, 1), ClassSpec(2, 0, 2), ClassSpec(3, 0, 1)}) {
            std::vector<MonotoneBlock> bl{{Direction::decreasing, spec.k1},
                                          {Direction::increasing, spec.k2},
                                          {Direction::decreasing, spec.k3}};
            CHECK(contains_monotone_blocks(s, bl) == contains(s, class_pattern(spec)));
        }
    }
}

TEST_CASE("Wilf equivalence of S_3 patterns up to n = 8") {
    auto r = checks::s3_wilf_counts(VerifyOptions{6, 7});
    CHECK(r.pass);
}

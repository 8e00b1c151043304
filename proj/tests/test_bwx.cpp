#include <catch_amalgamated.hpp>

#include <set>

#include "permutonlab/bwx.hpp"
#include "permutonlab/verify.hpp"

using namespace permutonlab;

namespace {
Permutation P(const char* s) { return Permutation::parse(s); }

// the length-20 coloring example (dots of the illustration, left to right)
Permutation fig_perm() {
    return Permutation({14, 10, 17, 8, 20, 6, 15, 3, 13, 19, 11, 9, 2, 1, 18, 16, 4, 12, 7, 5});
}

// shaded boxes of that illustration, as per-column top rows: columns 1..16
// are blue up to these rows, everything else is white
std::vector<std::pair<int, int>> fig_blue_columns() {
    return {{1, 16}, {2, 16}, {3, 14}, {4, 14}, {5, 14}, {6, 14}, {7, 12}, {8, 12},
            {9, 10}, {10, 10}, {11, 8}, {12, 3}, {13, 3}, {14, 3}, {15, 3}, {16, 3}};
}
}

TEST_CASE("coloring: all white when no occurrence exists") {
    Coloring col = color_boxes(P("321"), P("12"));
    CHECK(col.blue_count() == 0);
    CHECK(frozen_region(P("321"), P("12")).size() == 9);
}

TEST_CASE("coloring: worked 4-point example") {
    // tau = I_1: blue boxes are those with some point strictly northeast
    Coloring col = color_boxes(P("3142"), P("1"));
    std::set<std::pair<int, int>> expect;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 3; ++j) expect.insert({i, j});
    expect.insert({3, 1});
    auto blue = col.blue_boxes();
    CHECK(std::set<std::pair<int, int>>(blue.begin(), blue.end()) == expect);
}

TEST_CASE("coloring: the length-20 illustration") {
    Coloring col = color_boxes(fig_perm(), P("12"));
    std::set<std::pair<int, int>> expect;
    for (auto [i, top] : fig_blue_columns())
        for (int j = 1; j <= top; ++j) expect.insert({i, j});
    auto blue = col.blue_boxes();
    CHECK(std::set<std::pair<int, int>>(blue.begin(), blue.end()) == expect);
    CHECK(col.blue_count() == 155);
}

TEST_CASE("coloring engines agree and blue is SW-closed") {
    auto r = checks::blue_sw_closed(VerifyOptions{6, 7});
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("empty tau colors everything blue") {
    Coloring col = color_boxes(P("321"), Permutation());
    CHECK(col.blue_count() == 9);
    LambdaExtraction ex = extract_lambda(P("321"), Permutation());
    CHECK(ex.shape.str() == "3,3,3");
    CHECK(ex.traversal.word() == P("321"));
}

TEST_CASE("extraction: worked examples") {
    LambdaExtraction ex = extract_lambda(P("3142"), P("1"));
    CHECK(ex.shape.str() == "2,2");
    CHECK(ex.traversal.word() == P("21"));
    CHECK(ex.col_map == std::vector<int>{1, 2});
    CHECK(ex.row_map == std::vector<int>{1, 3});

    LambdaExtraction empty = extract_lambda(P("321"), P("12"));
    CHECK(empty.shape.num_rows() == 0);

    LambdaExtraction fig = extract_lambda(fig_perm(), P("12"));
    CHECK(fig.shape.str() == "7,7,7,5,5,5,4");
    CHECK(fig.col_map == std::vector<int>{1, 2, 4, 6, 8, 13, 14});
    CHECK(fig.traversal.word() == P("7654321"));
}

TEST_CASE("bwx_map: worked examples") {
    CHECK(bwx_map(P("3142"), 2, P("1"), BwxDirection::i_to_j) == P("1342"));
    CHECK(bwx_map(P("321"), 2, P("12"), BwxDirection::i_to_j) == P("321"));
    CHECK_THROWS_AS(bwx_map(P("123"), 2, P("1"), BwxDirection::i_to_j), PreconditionViolated);
    // inverse direction undoes the map
    CHECK(bwx_map(P("1342"), 2, P("1"), BwxDirection::j_to_i) == P("3142"));
}

TEST_CASE("bwx_map on the length-20 illustration") {
    // The extracted shape admits a unique 21-avoiding traversal, so every
    // valid inner strategy must reproduce the illustrated image.
    Permutation pi = fig_perm();
    Permutation expect({1, 6, 17, 8, 20, 14, 15, 10, 13, 19, 11, 9, 2, 3, 18, 16, 4, 12, 7, 5});

    BwxOptions growth;
    growth.strategy = InnerStrategy::growth;
    CHECK(bwx_map(pi, 2, P("12"), BwxDirection::i_to_j, growth) == expect);

    BwxOptions enumer;
    enumer.strategy = InnerStrategy::enumeration;
    CHECK(bwx_map(pi, 2, P("12"), BwxDirection::i_to_j, enumer) == expect);

    // white-box points (columns outside the blue region) are fixed
    for (int i : {3, 5, 7, 9, 10, 11, 12, 15, 16, 17, 18, 19, 20})
        CHECK(expect(i) == pi(i));
}

TEST_CASE("bwx_map is a bijection onto the target class") {
    auto r = checks::bwx_bijectivity(VerifyOptions{6, 7});
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("frozen points fixed and lambda stable") {
    CHECK(checks::frozen_fixed_points(VerifyOptions{6, 7}).pass);
    CHECK(checks::lambda_stability(VerifyOptions{5, 7}).pass);
}

TEST_CASE("pipeline worked examples") {
    // (2,0,1): first step k=2 with tau = I_1, second step degenerate
    PipelineTrace tr = pipeline(P("3142"), ClassSpec(2, 0, 1));
    CHECK(tr.rho == P("1342"));
    CHECK(tr.rho_rc == P("3124"));
    CHECK(tr.pi == P("1342"));

    // (1,1,1): both steps degenerate, rc twice is the identity
    for (const auto& s : enumerate_avoiders(5, PatternSet({P("123")})))
        CHECK(pipeline_image(s, ClassSpec(1, 1, 1)) == s);

    CHECK(pipeline_image(P("321"), ClassSpec(2, 0, 1)) == P("321"));
    CHECK_THROWS_AS(pipeline(P("1234"), ClassSpec(2, 1, 1)), PreconditionViolated);
}

TEST_CASE("pipeline maps classes bijectively at small n") {
    for (const ClassSpec& spec : {ClassSpec(2, 0, 2), ClassSpec(2, 1, 1)}) {
        Permutation src = increasing_pattern(spec.k1 + spec.k2 + spec.k3);
        Permutation dst = class_pattern(spec);
        for (int n = 0; n <= 6; ++n) {
            std::set<Permutation> image;
            std::uint64_t count = 0;
            for (const auto& s : enumerate_avoiders(n, PatternSet({src}))) {
                ++count;
                image.insert(pipeline_image(s, spec));
            }
            CHECK(image.size() == count);
            CHECK(image.size() == count_avoiders(n, PatternSet({dst})));
        }
    }
}

TEST_CASE("strategy A and strategy B both work inside bwx_map") {
    // strategies need not agree pointwise but both must land in the class
    BwxOptions a, b;
    a.strategy = InnerStrategy::growth;
    b.strategy = InnerStrategy::enumeration;
    for (const auto& s : enumerate_avoiders(6, PatternSet({P("123")}))) {
        Permutation ia = bwx_map(s, 3, Permutation(), BwxDirection::i_to_j, a);
        Permutation ib = bwx_map(s, 3, Permutation(), BwxDirection::i_to_j, b);
        CHECK(avoids(ia, P("321")));
        CHECK(avoids(ib, P("321")));
    }
}

TEST_CASE("enumeration strategy pairing cache round-trips") {
    auto dir = std::filesystem::temp_directory_path() / "permutonlab_test_cache";
    std::filesystem::remove_all(dir);
    FerrersShape sh = FerrersShape::parse("3,3,3");
    EnumerationBijection fresh(sh, 2, dir);
    REQUIRE(std::filesystem::exists(dir));
    EnumerationBijection cached(sh, 2, dir);
    for (const auto& t : enumerate_avoiding_traversals(sh, P("12")))
        CHECK(fresh.map_i_to_j(t) == cached.map_i_to_j(t));
    std::filesystem::remove_all(dir);
}

#include <doctest.h>

#include <cstdio>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "qspace/qmatrix.hpp"
#include "test_util.hpp"

using namespace qspace;

TEST_CASE("constraint validation") {
    CHECK_NOTHROW(make_q(Field::rationals(), {{"1", "-1"}, {"-1", "1"}}));
    CHECK_NOTHROW(load_q("ex33_q1.json"));

    // 2 * 2 != 1, reported at entry (1,2)
    try {
        make_q(Field::rationals(), {{"1", "2"}, {"2", "1"}});
        FAIL("expected validation failure");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("(1,2)") != std::string::npos);
    }

    // diagonal must be 1
    CHECK_THROWS_AS(make_q(Field::rationals(), {{"2", "1"}, {"1", "1"}}), ValidationError);
    // zero entries are excluded (0 * anything != 1 anyway)
    CHECK_THROWS_AS(make_q(Field::rationals(), {{"1", "0"}, {"0", "1"}}), ValidationError);
    // ragged array
    CHECK_THROWS_AS(make_q(Field::rationals(), {{"1", "1"}, {"1"}}), ValidationError);
}

TEST_CASE("row equality matches the fixture blocks") {
    QMatrix q = load_q("ex47.json");
    CHECK(q.rows_equal(1, 2));
    CHECK_FALSE(q.rows_equal(1, 3));
    CHECK(q.rows_equal(3, 4));
    for (int i = 1; i <= 4; ++i) CHECK(q.rows_equal(i, i));
}

TEST_CASE("entry labels classify equal entries") {
    QMatrix q = make_q(Field::rationals(), {{"1", "2"}, {"1/2", "1"}});
    CHECK(q.label(1, 1) == q.label(2, 2));
    CHECK(q.label(1, 2) != q.label(2, 1));
    CHECK(q.label(1, 2) != q.label(1, 1));
}

TEST_CASE("block decomposition") {
    BlockPartition b47 = block_decomposition(load_q("ex47.json"));
    CHECK(b47.blocks == std::vector<std::vector<int>>{{1, 2}, {3, 4}});
    CHECK(b47.block_sizes() == std::vector<int>{2, 2});
    CHECK(b47.block_index(1) == 0);
    CHECK(b47.block_index(4) == 1);
    CHECK_FALSE(b47.singletons_only());

    for (int n = 1; n <= 5; ++n) {
        BlockPartition ones = block_decomposition(all_ones_q(n));
        CHECK(ones.count() == 1);
        CHECK(static_cast<int>(ones.blocks[0].size()) == n);
    }

    BlockPartition b33 = block_decomposition(load_q("ex33_q1.json"));
    CHECK(b33.blocks == std::vector<std::vector<int>>{{1}, {2}, {3}});
    CHECK(b33.singletons_only());
}

TEST_CASE("blocks partition the index set and mirror row equality") {
    for (const char* name : {"ex47.json", "ex33_q1.json", "ex33_q2.json", "ones3.json",
                             "f3_allneg_n3.json", "bench12.json"}) {
        QMatrix q = load_q(name);
        BlockPartition blocks = block_decomposition(q);
        std::set<int> seen;
        for (const auto& b : blocks.blocks) {
            CHECK_FALSE(b.empty());
            for (int i : b) CHECK(seen.insert(i).second); // exactly once
        }
        CHECK(static_cast<int>(seen.size()) == q.size());
        for (int i = 1; i <= q.size(); ++i) {
            for (int j = 1; j <= q.size(); ++j) {
                REQUIRE(q.rows_equal(i, j) ==
                        (blocks.block_index(i) == blocks.block_index(j)));
            }
        }
    }
}

TEST_CASE("json round trip is exact") {
    QMatrix q = load_q("ex47.json");
    CHECK(QMatrix::from_json(q.to_json()) == q);

    QMatrix qp = load_q("f5_two_n2.json");
    CHECK(QMatrix::from_json(qp.to_json()) == qp);
    CHECK(qp.field() == Field::prime(5));

    std::string tmp = std::string(QSPACE_DATA_DIR) + "/../build/tmp_roundtrip_q.json";
    q.save(tmp);
    CHECK(QMatrix::load(tmp) == q);
    std::remove(tmp.c_str());
}

TEST_CASE("schema violations are rejected") {
    nlohmann::json bad = {{"field", "rational"},
                          {"n", 2},
                          {"entries", {{"1", "1"}, {"1", "1"}, {"1", "1"}}}};
    CHECK_THROWS_AS(QMatrix::from_json(bad), ValidationError);

    nlohmann::json missing = {{"n", 2}, {"entries", {{"1", "1"}, {"1", "1"}}}};
    CHECK_THROWS_AS(QMatrix::from_json(missing), ValidationError);

    CHECK_THROWS_AS(QMatrix::load(data_path("no_such_file.json")), Error);
}

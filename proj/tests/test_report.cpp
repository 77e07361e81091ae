#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "qspace/membership.hpp"
#include "qspace/report.hpp"
#include "test_util.hpp"

using namespace qspace;

namespace {

const char* kQFixtures[] = {"ex47.json",      "ex33_q1.json",   "ex33_q2.json",
                            "ones3.json",     "qneg1_n2.json",  "q2_n2.json",
                            "f2_ones_n2.json", "f2_ones_n3.json", "f3_ones_n2.json",
                            "f3_ones_n3.json", "f3_neg1_n2.json", "f3_allneg_n3.json",
                            "f5_two_n2.json", "bench12.json"};

template <typename F>
void for_all_matrices(std::uint64_t p, int n, F&& fn) {
    Field f = Field::prime(p);
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(n) * n, 0);
    while (true) {
        FieldMatrix m(f, n);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                m.set(i, j, Scalar::of_residue(f, digits[(i - 1) * n + (j - 1)]));
            }
        }
        fn(m);
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
        if (k == digits.size()) break;
    }
}

std::size_t closure_order(int n, const std::vector<Perm>& gens) {
    std::set<Perm> seen{Perm::identity(n)};
    std::vector<Perm> frontier{Perm::identity(n)};
    while (!frontier.empty()) {
        std::vector<Perm> next;
        for (const Perm& e : frontier) {
            for (const Perm& g : gens) {
                Perm prod = e * g;
                if (seen.insert(prod).second) next.push_back(prod);
            }
        }
        frontier = std::move(next);
    }
    return seen.size();
}

// rank over GF(2) by bitwise elimination; rows packed into machine words
bool invertible_bits(std::uint16_t bits, int n) {
    std::uint32_t rows[4] = {0, 0, 0, 0};
    const std::uint32_t mask = (1u << n) - 1;
    for (int i = 0; i < n; ++i) rows[i] = (bits >> (i * n)) & mask;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r) {
            if ((rows[r] >> c) & 1u) {
                piv = r;
                break;
            }
        }
        if (piv < 0) return false;
        std::swap(rows[c], rows[piv]);
        for (int r = 0; r < n; ++r) {
            if (r != c && ((rows[r] >> c) & 1u)) rows[r] ^= rows[c];
        }
    }
    return true;
}

} // namespace

TEST_CASE("structure strings") {
    CHECK(structure_string({2, 2}, "C_2", 2) == "(GL_2 × GL_2) ⋊ C_2");
    CHECK(structure_string({4, 4, 4}, "C_3", 3) == "(GL_4 × GL_4 × GL_4) ⋊ C_3");
    CHECK(structure_string({4}, "C_1", 1) == "GL_4(k)");
    CHECK(structure_string({1, 1, 1}, "S_3", 6) == "(k*)³ ⋊ S_3");
    CHECK(structure_string({1, 1, 1}, "C_1", 1) == "(k*)³ ⋊ C_1");
    // multi-digit superscript
    std::vector<int> twelve(12, 1);
    CHECK(structure_string(twelve, "C_2", 2) == "(k*)¹² ⋊ C_2");
}

TEST_CASE("full analysis on pinned examples") {
    AutReport r47 = analyze(load_q("ex47.json"));
    CHECK(r47.n == 4);
    CHECK(r47.block_sizes == std::vector<int>{2, 2});
    CHECK(r47.p_order == 8);
    CHECK(r47.i_order == 4);
    CHECK(r47.quotient_order == 2);
    CHECK(r47.quotient_name.name == "C_2");
    CHECK(r47.structure == "(GL_2 × GL_2) ⋊ C_2");

    AutReport r1 = analyze(load_q("ex33_q1.json"));
    CHECK(r1.p_order == 2);
    CHECK(r1.i_order == 1);
    CHECK(r1.structure == "(k*)³ ⋊ C_2");

    AutReport r2 = analyze(load_q("ex33_q2.json"));
    CHECK(r2.p_order == 3);
    CHECK(r2.quotient_name.name == "C_3");
    CHECK(r2.structure == "(k*)³ ⋊ C_3");

    AutReport rones = analyze(load_q("ones3.json"));
    CHECK(rones.p_order == 6);
    CHECK(rones.i_order == 6);
    CHECK(rones.quotient_order == 1);
    CHECK(rones.structure == "GL_3(k)");

    AutReport rneg = analyze(load_q("f3_allneg_n3.json"));
    CHECK(rneg.p_order == 6);
    CHECK(rneg.i_order == 1);
    CHECK(rneg.quotient_name.name == "S_3");
    CHECK(rneg.structure == "(k*)³ ⋊ S_3");

    AutReport rtriv = analyze(load_q("q2_n2.json"));
    CHECK(rtriv.p_order == 1);
    CHECK(rtriv.structure == "(k*)² ⋊ C_1");

    AutReport rbig = analyze(load_q("bench12.json"));
    CHECK(rbig.p_order == 41472);
    CHECK(rbig.i_order == 13824);
    CHECK(rbig.quotient_order == 3);
    CHECK(rbig.quotient_name.name == "C_3");
    CHECK(rbig.structure == "(GL_4 × GL_4 × GL_4) ⋊ C_3");
}

TEST_CASE("order factorization and engine agreement across fixtures") {
    for (const char* name : kQFixtures) {
        QMatrix q = load_q(name);
        AutReport r = analyze(q);
        CHECK(r.p_order == r.i_order * r.quotient_order);
        int degree_sum = 0;
        for (int b : r.block_sizes) degree_sum += b;
        CHECK(degree_sum == r.n);
        // generators regenerate the full search result
        if (r.p_order <= 5000) {
            CHECK(closure_order(r.n, r.p_generators) == r.p_order);
        }
        if (q.size() <= 8) {
            AutReport rn = analyze(q, Engine::naive);
            CHECK(rn.p_order == r.p_order);
            CHECK(rn.structure == r.structure);
        }
    }
}

TEST_CASE("report serialization") {
    AutReport r = analyze(load_q("ex47.json"));
    nlohmann::json j = r.to_json();
    CHECK(j["n"] == 4);
    CHECK(j["p_order"] == 8);
    CHECK(j["i_order"] == 4);
    CHECK(j["quotient_order"] == 2);
    CHECK(j["quotient_name"] == "C_2");
    CHECK(j["structure"] == "(GL_2 × GL_2) ⋊ C_2");
    CHECK(j["block_sizes"] == nlohmann::json::array({2, 2}));
    CHECK(j["blocks"][0] == nlohmann::json::array({1, 2}));
    CHECK(j["field"] == "rational");
    CHECK(j["p_generators"].is_array());

    std::string text = r.text();
    CHECK(text.find("(GL_2 × GL_2) ⋊ C_2") != std::string::npos);
    CHECK(text.find("|P_q|     : 8") != std::string::npos);
    CHECK(text.find("{1,2}") != std::string::npos);
}

TEST_CASE("general linear group orders") {
    CHECK(gl_order(1, 2) == 1);
    CHECK(gl_order(1, 3) == 2);
    CHECK(gl_order(2, 2) == 6);
    CHECK(gl_order(2, 3) == 48);
    CHECK(gl_order(3, 2) == 168);
    CHECK(gl_order(2, 5) == 480);
    CHECK_THROWS_AS(gl_order(0, 3), ValidationError);

    // oracle: count invertible matrices directly
    for (auto [b, p] : {std::pair<int, std::uint64_t>{1, 2}, {1, 3}, {1, 5},
                        {2, 2}, {2, 3}, {3, 2}}) {
        std::uint64_t found = 0;
        for_all_matrices(p, b, [&](const FieldMatrix& m) {
            if (m.is_invertible()) ++found;
        });
        CHECK(found == gl_order(b, p));
    }
}

TEST_CASE("census against exhaustive membership loops") {
    // finite-field inputs: census must equal a direct scan with is_member
    for (const char* name : {"f3_neg1_n2.json", "f5_two_n2.json", "f2_ones_n2.json"}) {
        QMatrix q = load_q(name);
        std::uint64_t p = q.field().modulus();
        std::uint64_t direct = 0;
        for_all_matrices(p, q.size(), [&](const FieldMatrix& m) {
            if (is_member(q, m)) ++direct;
        });
        CensusResult c = census(q, p);
        CHECK(c.counted == direct);
        CHECK(c.match());
    }

    CensusResult c3 = census(load_q("f3_neg1_n2.json"), 3);
    CHECK(c3.total == 81);
    CHECK(c3.counted == 8);
    CHECK(c3.predicted == 8);

    CensusResult c5 = census(load_q("f5_two_n2.json"), 5);
    CHECK(c5.total == 625);
    CHECK(c5.counted == 16);

    CensusResult c2 = census(load_q("f2_ones_n2.json"), 2);
    CHECK(c2.counted == 6); // all invertible 2x2 matrices over GF(2)
}

TEST_CASE("census transports rational parameters to a chosen prime") {
    // only the coincidence pattern of q matters, so a rational matrix can be
    // counted over any prime field
    CensusResult c = census(load_q("qneg1_n2.json"), 3);
    CHECK(c.total == 81);
    CHECK(c.counted == 8);
    CHECK(c.match());

    QMatrix q47 = load_q("ex47.json");
    CensusResult c47 = census(q47, 2);
    CHECK(c47.total == 65536);
    CHECK(c47.counted == 72);
    CHECK(c47.predicted == 72); // 2 cosets of GL_2(F_2) x GL_2(F_2)

    // independent bit-matrix scan of the same space
    std::uint64_t direct = 0;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        bool ok = invertible_bits(static_cast<std::uint16_t>(bits), 4);
        for (int i = 1; ok && i <= 4; ++i) {
            for (int s = 1; ok && s <= 4; ++s) {
                if (!((bits >> ((i - 1) * 4 + (s - 1))) & 1u)) continue;
                for (int j = 1; ok && j <= 4; ++j) {
                    for (int t = 1; t <= 4; ++t) {
                        if (!((bits >> ((j - 1) * 4 + (t - 1))) & 1u)) continue;
                        if (q47.label(i, j) != q47.label(s, t)) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        if (ok) ++direct;
    }
    CHECK(direct == c47.counted);
}

TEST_CASE("census worker splits and guard rails") {
    QMatrix q47 = load_q("ex47.json");
    CensusResult seq = census(q47, 2, kDefaultCensusBudget, 1);
    CensusResult par = census(q47, 2, kDefaultCensusBudget, 4);
    CHECK(seq.counted == par.counted);
    CHECK(seq.total == par.total);

    CHECK_THROWS_AS(census(q47, 4), ValidationError);  // composite modulus
    CHECK_THROWS_AS(census(q47, 1), ValidationError);
    // 7^9 blows past the default budget
    CHECK_THROWS_AS(census(all_ones_q(3), 7), CapExceededError);
    // raising the budget unblocks a deliberately small overrun: 3^4 with a tiny cap
    CHECK_THROWS_AS(census(load_q("f3_neg1_n2.json"), 3, 16), CapExceededError);
    CHECK_NOTHROW(census(load_q("f3_neg1_n2.json"), 3, 100));
    CHECK_THROWS_AS(census(all_ones_q(15), 2, UINT64_MAX / 2), CapExceededError);
}

TEST_CASE("member sampling is seeded and sound") {
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);
    PermGroup p = compatible_group(q);

    MemberSampler a(q, blocks, p, 99);
    MemberSampler b(q, blocks, p, 99);
    MemberSampler c(q, blocks, p, 100);
    bool differs = false;
    for (int trial = 0; trial < 25; ++trial) {
        FieldMatrix ma = a.next();
        CHECK(ma == b.next());
        if (!(ma == c.next())) differs = true;
        REQUIRE(is_member(q, ma));
    }
    CHECK(differs);
    CHECK(random_member(q, blocks, p, 7) == random_member(q, blocks, p, 7));

    // arbitrary-matrix draws are reproducible too
    MemberSampler d(q, blocks, p, 99);
    MemberSampler e(q, blocks, p, 99);
    for (int trial = 0; trial < 10; ++trial) CHECK(d.random_matrix() == e.random_matrix());

    PermGroup wrong = PermGroup::trivial(3);
    CHECK_THROWS_AS(MemberSampler(q, blocks, wrong, 1), ValidationError);
}

TEST_CASE("skeleton cosets label members") {
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);
    PermGroup p = compatible_group(q);
    PermGroup i = invariant_subgroup(q, p, blocks);
    CosetList cosets = quotient_cosets(p, i);

    // non-members are rejected
    CHECK_THROWS_AS(skeleton_coset(q, i, FieldMatrix(q.field(), 4)), ValidationError);

    // the canonical representative of each coset maps to itself
    for (const Perm& rep : cosets.representatives) {
        CHECK(skeleton_coset(q, i, permutation_matrix(rep, q.field())) == rep);
    }

    // block members land on the identity coset; every compatible permutation
    // matrix lands on its own reduced representative
    for (const Perm& pi : p.elements()) {
        Perm label = skeleton_coset(q, i, permutation_matrix(pi, q.field()));
        CHECK(label == coset_min(pi, i));
        if (i.contains(pi)) CHECK(label.is_identity());
    }

    // the label is independent of which skeleton witnesses it
    MemberSampler sampler(q, blocks, p, 5150);
    for (int trial = 0; trial < 40; ++trial) {
        FieldMatrix m = sampler.next();
        Perm label = skeleton_coset(q, i, m);
        for (const Perm& pi : skeleton_all(m)) {
            REQUIRE(coset_min(pi, i) == label);
        }
        REQUIRE((label.is_identity() == is_block_member(blocks, m)));
    }
}

TEST_CASE("skeleton coset kernel scanned exhaustively") {
    for (const char* name : {"f3_neg1_n2.json", "f5_two_n2.json"}) {
        QMatrix q = load_q(name);
        BlockPartition blocks = block_decomposition(q);
        PermGroup p = compatible_group(q);
        PermGroup i = invariant_subgroup(q, p, blocks);
        for_all_matrices(q.field().modulus(), q.size(), [&](const FieldMatrix& m) {
            if (!is_member(q, m)) return;
            bool in_kernel = skeleton_coset(q, i, m).is_identity();
            REQUIRE(in_kernel == is_block_member(blocks, m));
        });
    }
}

TEST_CASE("skeleton coset map is a homomorphism onto the quotient") {
    for (const char* name : {"ex47.json", "f3_allneg_n3.json", "f5_two_n2.json"}) {
        QMatrix q = load_q(name);
        BlockPartition blocks = block_decomposition(q);
        PermGroup p = compatible_group(q);
        PermGroup i = invariant_subgroup(q, p, blocks);
        CHECK(skeleton_coset_homomorphism(q, blocks, p, i, 300, 31337));
    }
}

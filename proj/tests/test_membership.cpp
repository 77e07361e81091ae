#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "qspace/membership.hpp"
#include "qspace/report.hpp"
#include "test_util.hpp"

using namespace qspace;

namespace {

const Field kQ = Field::rationals();

FieldMatrix random_matrix(Field f, int n, std::mt19937_64& rng) {
    FieldMatrix m(f, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (f.is_rational()) {
                m.set(i, j, Scalar::of_int(f, static_cast<long long>(rng() % 7) - 3));
            } else {
                m.set(i, j, Scalar::of_residue(f, rng() % f.modulus()));
            }
        }
    }
    return m;
}

FieldMatrix random_invertible(Field f, int n, std::mt19937_64& rng) {
    while (true) {
        FieldMatrix m = random_matrix(f, n, rng);
        if (m.is_invertible()) return m;
    }
}

// random element of the block-diagonal subgroup
FieldMatrix random_block_diagonal(const BlockPartition& blocks, Field f,
                                  std::mt19937_64& rng) {
    std::vector<FieldMatrix> factors;
    for (const auto& b : blocks.blocks) {
        factors.push_back(random_invertible(f, static_cast<int>(b.size()), rng));
    }
    return embed_blocks(blocks, factors, f);
}

// brute-force skeleton enumeration: all permutations supported on nonzeros
std::vector<Perm> skeletons_by_scan(const FieldMatrix& m) {
    const int n = m.size();
    std::vector<int> img(n);
    for (int k = 0; k < n; ++k) img[k] = k + 1;
    std::vector<Perm> out;
    do {
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j) ok = !m.at(img[j - 1], j).is_zero();
        if (ok) out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

// enumerate every n x n matrix over GF(p) and pass it to fn
template <typename Fn>
void for_all_matrices(std::uint64_t p, int n, Fn&& fn) {
    Field f = Field::prime(p);
    const int cells = n * n;
    std::vector<std::uint64_t> digits(cells, 0);
    while (true) {
        FieldMatrix m(f, n);
        for (int k = 0; k < cells; ++k) {
            m.set(k / n + 1, k % n + 1, Scalar::of_residue(f, digits[k]));
        }
        fn(m);
        int k = 0;
        while (k < cells && ++digits[k] == p) digits[k++] = 0;
        if (k == cells) break;
    }
}

} // namespace

TEST_CASE("membership criterion on pinned examples") {
    QMatrix qneg = load_q("qneg1_n2.json"); // q_12 = -1
    QMatrix qtwo = load_q("q2_n2.json");    // q_12 = 2
    FieldMatrix swap = make_m(kQ, {{"0", "1"}, {"1", "0"}});

    CHECK(is_member(qneg, swap));
    CHECK_FALSE(is_member(qtwo, swap));

    auto witness = member_violation(qtwo, swap);
    REQUIRE(witness.has_value());
    CHECK(witness->i == 1);
    CHECK(witness->j == 2);
    CHECK(witness->s == 2);
    CHECK(witness->t == 1);
    CHECK_FALSE(member_violation(qneg, swap).has_value());

    // invertible diagonal matrices always pass
    for (const char* name : {"ex47.json", "ex33_q1.json", "q2_n2.json"}) {
        QMatrix q = load_q(name);
        FieldMatrix d(kQ, q.size());
        for (int i = 1; i <= q.size(); ++i) d.set(i, i, Scalar::of_int(kQ, i + 1));
        CHECK(is_member(q, d));
    }

    // singular matrices never pass, even with consistent q-pattern
    FieldMatrix zero(kQ, 2);
    CHECK_FALSE(is_member(qneg, zero));
    CHECK_FALSE(member_violation(qneg, zero).has_value()); // pattern is vacuously fine

    CHECK_THROWS_AS(is_member(qneg, FieldMatrix::identity(kQ, 3)), ValidationError);
    CHECK_THROWS_AS(is_member(load_q("f3_neg1_n2.json"), FieldMatrix::identity(kQ, 2)),
                    ValidationError);
}

TEST_CASE("pairwise equation form agrees with the quadruple criterion") {
    QMatrix qtwo = load_q("q2_n2.json");
    CHECK(satisfies_membership_equations(qtwo, FieldMatrix::identity(kQ, 2)));
    CHECK_FALSE(satisfies_membership_equations(qtwo, make_m(kQ, {{"1", "1"}, {"0", "1"}})));

    for (const char* name : {"f3_neg1_n2.json", "f3_ones_n2.json", "f2_ones_n2.json",
                             "f5_two_n2.json"}) {
        QMatrix q = load_q(name);
        for_all_matrices(q.field().modulus(), 2, [&](const FieldMatrix& m) {
            bool quadruple = is_member(q, m);
            bool pairwise = satisfies_membership_equations(q, m) && m.is_invertible();
            REQUIRE(quadruple == pairwise);
        });
    }
}

TEST_CASE("skeleton search") {
    CHECK(skeleton_any(FieldMatrix::identity(kQ, 3)) == Perm::identity(3));
    Perm c({2, 3, 1});
    CHECK(skeleton_any(permutation_matrix(c, kQ)) == c);
    // tie-break: lexicographically least image array
    CHECK(skeleton_any(make_m(kQ, {{"1", "1"}, {"1", "2"}})) == Perm::identity(2));
    // a zero row leaves no system of distinct representatives
    CHECK_FALSE(skeleton_any(make_m(kQ, {{"0", "0"}, {"1", "1"}})).has_value());

    CHECK(skeleton_all(make_m(kQ, {{"1", "1"}, {"1", "2"}})) ==
          std::vector<Perm>{Perm::identity(2), Perm({2, 1})});
    CHECK(skeleton_all(FieldMatrix::identity(kQ, 2)) ==
          std::vector<Perm>{Perm::identity(2)});

    std::vector<int> img{1, 2, 3, 4};
    do {
        Perm pi(img);
        CHECK(skeleton_all(permutation_matrix(pi, kQ)) == std::vector<Perm>{pi});
    } while (std::next_permutation(img.begin(), img.end()));

    FieldMatrix dense(kQ, 4);
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) dense.set(i, j, Scalar::of_int(kQ, i + j));
    }
    CHECK_THROWS_AS(skeleton_all(dense, 10), CapExceededError); // 24 skeletons
    CHECK(skeleton_all(dense).size() == 24);
}

TEST_CASE("skeleton enumeration matches brute force") {
    std::mt19937_64 rng(31337);
    const Field f3 = Field::prime(3);
    for (int trial = 0; trial < 150; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4); // 2..5
        FieldMatrix m = random_matrix(f3, n, rng);
        std::vector<Perm> expected = skeletons_by_scan(m);
        REQUIRE(skeleton_all(m) == expected);
        auto any = skeleton_any(m);
        if (expected.empty()) {
            REQUIRE_FALSE(any.has_value());
        } else {
            // skeleton_any returns the least skeleton
            REQUIRE(any == expected.front());
        }
    }
}

TEST_CASE("block subgroup membership and embedding") {
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);

    FieldMatrix i2 = FieldMatrix::identity(kQ, 2);
    CHECK(embed_blocks(blocks, {i2, i2}, kQ) == FieldMatrix::identity(kQ, 4));

    BlockPartition singles;
    singles.blocks = {{1}, {2}};
    singles.block_of = {0, 1};
    FieldMatrix two = make_m(kQ, {{"2"}});
    FieldMatrix three = make_m(kQ, {{"3"}});
    CHECK(embed_blocks(singles, {two, three}, kQ) ==
          make_m(kQ, {{"2", "0"}, {"0", "3"}}));

    CHECK(is_block_member(blocks, FieldMatrix::identity(kQ, 4)));
    FieldMatrix off = FieldMatrix::identity(kQ, 4);
    off.set(1, 3, Scalar::of_int(kQ, 1)); // crosses from block {1,2} into {3,4}
    CHECK_FALSE(is_block_member(blocks, off));
    FieldMatrix singular(kQ, 4); // zero matrix is block-supported but not invertible
    CHECK_FALSE(is_block_member(blocks, singular));

    CHECK_THROWS_AS(embed_blocks(blocks, {i2}, kQ), ValidationError); // count
    CHECK_THROWS_AS(embed_blocks(blocks, {i2, FieldMatrix::identity(kQ, 3)}, kQ),
                    ValidationError); // size
    CHECK_THROWS_AS(embed_blocks(blocks, {i2, make_m(kQ, {{"1", "1"}, {"1", "1"}})}, kQ),
                    ValidationError); // singular factor
    CHECK_THROWS_AS(embed_blocks(blocks, {i2, FieldMatrix::identity(Field::prime(3), 2)},
                                 kQ),
                    ValidationError); // field mismatch

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        FieldMatrix g = random_block_diagonal(blocks, kQ, rng);
        REQUIRE(is_block_member(blocks, g));
        REQUIRE(is_member(q, g)); // the block subgroup sits inside the member group
    }
}

TEST_CASE("member decomposition") {
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);

    MemberDecomposition di = decompose_member(q, blocks, FieldMatrix::identity(kQ, 4));
    CHECK(di.sigma.is_identity());
    CHECK(di.block_part == FieldMatrix::identity(kQ, 4));

    // a coset-minimal permutation factors as (itself, identity)
    Perm swap_blocks({3, 4, 1, 2});
    MemberDecomposition ds = decompose_member(q, blocks, permutation_matrix(swap_blocks, kQ));
    CHECK(ds.sigma == swap_blocks);
    CHECK(ds.block_part == FieldMatrix::identity(kQ, 4));

    // a non-minimal one snaps to its coset representative
    Perm four_cycle({3, 4, 2, 1}); // same coset as (1,3)(2,4) modulo block swaps
    MemberDecomposition dn = decompose_member(q, blocks, permutation_matrix(four_cycle, kQ));
    CHECK(dn.sigma == swap_blocks);
    CHECK(dn.block_part == permutation_matrix(Perm({1, 2, 4, 3}), kQ));
    CHECK(permutation_matrix(dn.sigma, kQ) * dn.block_part ==
          permutation_matrix(four_cycle, kQ));

    // (1,3) tears the blocks apart, so its matrix is invertible yet no member
    CHECK_THROWS_AS(decompose_member(q, blocks, permutation_matrix(Perm({3, 2, 1, 4}), kQ)),
                    ValidationError);
}

TEST_CASE("decomposition round-trips on sampled members") {
    for (const char* name : {"ex47.json", "f3_allneg_n3.json", "f5_two_n2.json",
                             "bench12.json"}) {
        QMatrix q = load_q(name);
        BlockPartition blocks = block_decomposition(q);
        PermGroup p = compatible_group(q);
        PermGroup i = invariant_subgroup(q, p, blocks);
        MemberSampler sampler(q, blocks, p, 123);
        for (int trial = 0; trial < 40; ++trial) {
            FieldMatrix m = sampler.next();
            REQUIRE(is_member(q, m));
            MemberDecomposition d = decompose_member(q, blocks, m);
            REQUIRE(permutation_matrix(d.sigma, m.field()) * d.block_part == m);
            REQUIRE(is_block_member(blocks, d.block_part));
            REQUIRE(p.contains(d.sigma));
            REQUIRE(coset_min(d.sigma, i) == d.sigma); // canonical representative
        }
    }
}

TEST_CASE("skeletons of members are compatible and support respects blocks") {
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);
    PermGroup p = compatible_group(q);
    MemberSampler sampler(q, blocks, p, 7);
    for (int trial = 0; trial < 60; ++trial) {
        FieldMatrix m = sampler.next();
        auto skels = skeleton_all(m);
        REQUIRE_FALSE(skels.empty());
        for (const Perm& pi : skels) {
            REQUIRE(p.contains(pi));
            // nonzero entries of a member connect only aligned blocks
            for (int i = 1; i <= q.size(); ++i) {
                for (int j = 1; j <= q.size(); ++j) {
                    if (!m.at(pi(i), j).is_zero()) {
                        REQUIRE(blocks.block_index(i) == blocks.block_index(j));
                    }
                }
            }
        }
    }
}

TEST_CASE("members are closed under product, inverse, and transpose") {
    std::mt19937_64 rng(11);
    for (const char* name : {"ex47.json", "f3_allneg_n3.json", "f5_two_n2.json"}) {
        QMatrix q = load_q(name);
        BlockPartition blocks = block_decomposition(q);
        PermGroup p = compatible_group(q);
        MemberSampler sampler(q, blocks, p, 2024);
        for (int trial = 0; trial < 40; ++trial) {
            FieldMatrix m = sampler.next();
            FieldMatrix w = sampler.next();
            REQUIRE(is_member(q, m * w));
            REQUIRE(is_member(q, m.inverse()));
            REQUIRE(is_member(q, m.transpose()));
        }
        // transpose closure holds as an equivalence on arbitrary matrices too
        for (int trial = 0; trial < 300; ++trial) {
            FieldMatrix m = random_matrix(q.field(), q.size(), rng);
            REQUIRE(is_member(q, m) == is_member(q, m.transpose()));
        }
    }
}

TEST_CASE("conjugation stability of the block subgroup") {
    std::mt19937_64 rng(17);
    QMatrix q = load_q("ex47.json");
    BlockPartition blocks = block_decomposition(q);
    PermGroup p = compatible_group(q);

    for (int trial = 0; trial < 25; ++trial) {
        FieldMatrix g = random_block_diagonal(blocks, kQ, rng);
        // exhaustive over the compatible group
        for (const Perm& pi : p.elements()) {
            FieldMatrix conj = permutation_matrix(pi, kQ) * g *
                               permutation_matrix(pi.inverse(), kQ);
            REQUIRE(is_block_member(blocks, conj));
        }
    }

    MemberSampler sampler(q, blocks, p, 31);
    for (int trial = 0; trial < 40; ++trial) {
        FieldMatrix n = sampler.next();
        FieldMatrix g = random_block_diagonal(blocks, kQ, rng);
        REQUIRE(is_block_member(blocks, n * g * n.inverse()));
    }
}

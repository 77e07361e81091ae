#pragma once

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qspace/membership.hpp"
#include "qspace/perm.hpp"

namespace qspace {

// Full structural description of the graded automorphism group: the group is
// the product of block general linear groups extended by the quotient of the
// compatible permutations over the block-invariant ones.
struct AutReport {
    int n;
    Field field;
    BlockPartition blocks;
    std::vector<int> block_sizes;
    std::uint64_t p_order;
    std::uint64_t i_order;
    std::uint64_t quotient_order;
    std::vector<Perm> p_generators;
    GroupName quotient_name;
    std::string structure;
    PermGroup p_group;
    PermGroup i_group;
    CosetList cosets;

    nlohmann::json to_json() const;
    std::string text() const;
};

AutReport analyze(const QMatrix& q, Engine engine = Engine::pruned,
                  const SearchOptions& opts = {});

// "(GL_{b_1} × … × GL_{b_m}) ⋊ Q", with "GL_n(k)" for a single block and
// trivial quotient and "(k*)^n ⋊ Q" when every block is a singleton.
std::string structure_string(const std::vector<int>& block_sizes,
                             const std::string& quotient_name,
                             std::uint64_t quotient_order);

// |GL_b(F_p)| = prod_{i=0}^{b-1} (p^b - p^i)
std::uint64_t gl_order(int b, std::uint64_t p);

// Brute-force member count over F_p versus the order predicted by the
// structure theorem. The equality pattern of q drives membership, so q may
// live over any field; p picks the coefficient field of the census.
struct CensusResult {
    std::uint64_t p;
    int n;
    std::uint64_t total;     // matrices enumerated = p^(n^2)
    std::uint64_t counted;   // members found by exhaustive check
    std::uint64_t predicted; // quotient_order * prod gl_order(b_i, p)

    bool match() const { return counted == predicted; }
    nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kDefaultCensusBudget = 1ull << 24;

CensusResult census(const QMatrix& q, std::uint64_t p,
                    std::uint64_t budget = kDefaultCensusBudget, int workers = 1);

// Seeded stream of uniformly structured members r_sigma * Phi(blocks):
// sigma uniform over P, block factors rejection-sampled until invertible.
class MemberSampler {
  public:
    MemberSampler(const QMatrix& q, const BlockPartition& blocks, const PermGroup& p,
                  std::uint64_t seed);
    FieldMatrix next();
    FieldMatrix random_matrix(); // uniform small matrix, not necessarily a member

  private:
    std::uint64_t below(std::uint64_t k); // unbiased, engine-stable
    Scalar random_scalar();
    const QMatrix& q_;
    const BlockPartition& blocks_;
    const PermGroup& p_;
    std::mt19937_64 eng_;
};

FieldMatrix random_member(const QMatrix& q, const BlockPartition& blocks,
                          const PermGroup& p, std::uint64_t seed);

// The coset representative of m's skeleton: the lexicographically least
// element of pi * I for pi = skeleton_any(m). Well-defined on members.
Perm skeleton_coset(const QMatrix& q, const PermGroup& i, const FieldMatrix& m);

// Sampled check that skeleton_coset is multiplicative: the coset of a product
// of members equals the product of their cosets.
bool skeleton_coset_homomorphism(const QMatrix& q, const BlockPartition& blocks,
                                 const PermGroup& p, const PermGroup& i, int samples,
                                 std::uint64_t seed);

} // namespace qspace

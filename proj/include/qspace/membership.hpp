#pragma once

#include <optional>
#include <vector>

#include "qspace/matrix.hpp"
#include "qspace/perm.hpp"
#include "qspace/qmatrix.hpp"

namespace qspace {

// First quadruple (i,j,s,t), in row-major order of the nonzero pair scan,
// witnessing (q_ij - q_st) * m_is * m_jt != 0.
struct QuadrupleWitness {
    int i, j, s, t;
};

// m lies in the graded automorphism group of the q-space iff it is invertible
// and every quadruple constraint holds.
bool is_member(const QMatrix& q, const FieldMatrix& m);

// Nullopt when all quadruple constraints hold (invertibility not considered).
std::optional<QuadrupleWitness> member_violation(const QMatrix& q, const FieldMatrix& m);

// Equivalent pairwise form of the quadruple constraints: for each i < j and
// s < t, (q_ij - q_st) m_is m_jt = (1 - q_ij q_st) m_js m_it, and for each
// i < j and every s, (q_ij - 1) m_is m_js = 0.
bool satisfies_membership_equations(const QMatrix& q, const FieldMatrix& m);

// A skeleton of m: a permutation pi with m_{pi(j), j} != 0 for all j.
// Returns the lexicographically least image-array choice found by augmenting
//-path matching; nullopt when the zero pattern admits no system of distinct
// representatives (then m is singular).
std::optional<Perm> skeleton_any(const FieldMatrix& m);

// All skeletons of m, sorted; throws CapExceededError beyond the cap.
std::vector<Perm> skeleton_all(const FieldMatrix& m, std::uint64_t cap = 1000000);

// Does m lie in the product of block general linear groups: invertible and
// supported on the diagonal blocks (m_ij = 0 whenever i, j sit in
// different blocks)?
bool is_block_member(const BlockPartition& blocks, const FieldMatrix& m);

// Assemble a block-diagonal matrix from per-block factors (factor w is the
// |B_w| x |B_w| matrix placed on block w's rows and columns).
FieldMatrix embed_blocks(const BlockPartition& blocks,
                         const std::vector<FieldMatrix>& factors, Field field);

// m = permutation_matrix(sigma) * block_part with sigma the canonical coset
// representative of the skeleton and block_part in the block product group.
struct MemberDecomposition {
    Perm sigma;
    FieldMatrix block_part;
};

MemberDecomposition decompose_member(const QMatrix& q, const BlockPartition& blocks,
                                     const FieldMatrix& m);

} // namespace qspace

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qspace/qmatrix.hpp"

namespace qspace {

// Permutation of {1,...,n}, stored as the image array images[i-1] = pi(i).
class Perm {
public:
    explicit Perm(std::vector<int> images); // validates bijection
    static Perm identity(int n);

    int degree() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i - 1]; }
    const std::vector<int>& images() const { return images_; }

    // Left action composition: (a * b)(i) = a(b(i)).
    Perm operator*(const Perm& o) const;
    Perm inverse() const;
    int order() const;
    bool is_identity() const;

    bool operator==(const Perm& o) const { return images_ == o.images_; }
    bool operator<(const Perm& o) const { return images_ < o.images_; }

    std::string cycles() const; // "(1,2)(3,4)", identity is "()"

private:
    std::vector<int> images_;
};

enum class Engine { naive, pruned };

struct SearchOptions {
    int naive_cap = 10;  // max n for the full n! scan
    int pruned_cap = 14; // max n for the backtracking engine
    int workers = 1;     // top-level branch fan-out
};

// An explicit subgroup of S_n: a lexicographically sorted element list.
class PermGroup {
public:
    // Sorts and deduplicates; verifies the identity is present, inverses are
    // present, and composition closure (full when the order is small, on a
    // deterministic sample above kFullClosureLimit elements).
    static PermGroup from_elements(int n, std::vector<Perm> elems);
    static PermGroup trivial(int n);
    static PermGroup symmetric(int n);
    static PermGroup block_symmetric(const BlockPartition& blocks);

    int degree() const { return n_; }
    std::size_t order() const { return elems_.size(); }
    const std::vector<Perm>& elements() const { return elems_; }
    bool contains(const Perm& p) const;
    bool is_abelian() const;
    std::vector<Perm> generators() const; // greedy small generating set

    static constexpr std::size_t kFullClosureLimit = 4096;

private:
    PermGroup(int n, std::vector<Perm> elems) : n_(n), elems_(std::move(elems)) {}
    int n_;
    std::vector<Perm> elems_; // sorted

    // The search and the subgroup filter produce sets that are groups by
    // construction (the compatibility predicate is closed under composition
    // and inversion), so they may skip from_elements' axiom checks.
    friend PermGroup compatible_group(const QMatrix& q, Engine engine,
                                      const SearchOptions& opts);
    friend PermGroup invariant_subgroup(const QMatrix& q, const PermGroup& p,
                                        const BlockPartition& blocks);
};

// Left cosets of a subgroup, one lexicographically least representative each.
struct CosetList {
    PermGroup subgroup;
    std::vector<Perm> representatives; // sorted
    std::size_t count() const { return representatives.size(); }
};

// True iff q_{pi(i),pi(j)} = q_{ij} for all i, j.
bool is_compatible(const QMatrix& q, const Perm& pi);

// The group of compatible permutations of q, computed by the requested
// engine. Throws CapExceededError when n is above the engine's cap.
PermGroup compatible_group(const QMatrix& q, Engine engine = Engine::pruned,
                           const SearchOptions& opts = {});

// The subgroup of P fixing every block setwise.
PermGroup invariant_subgroup(const QMatrix& q, const PermGroup& p,
                             const BlockPartition& blocks);

// Left cosets of I in P. Verifies that I is a normal subgroup of P
// (via generator conjugation) and throws ValidationError otherwise.
CosetList quotient_cosets(const PermGroup& p, const PermGroup& i);

// Lexicographically least element of the left coset g * I.
Perm coset_min(const Perm& g, const PermGroup& i);

// Same coset minimum for I = the product of block symmetric groups,
// computed greedily without enumerating I.
Perm block_coset_min(const Perm& g, const BlockPartition& blocks);

struct GroupName {
    std::string name;
    std::uint64_t order = 0;
    std::vector<Perm> generators; // populated for orders > 8
};

// Names groups of order <= 8 by (order, abelian flag, element-order
// multiset); larger groups are reported as "group of order N" with a
// generating set.
GroupName identify_small_group(const PermGroup& g);

// Identifies the quotient P/I presented by its coset list.
GroupName identify_quotient(const CosetList& cosets);

} // namespace qspace

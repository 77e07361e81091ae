#include "qspace/membership.hpp"

#include <algorithm>

#include "qspace/errors.hpp"

namespace qspace {

namespace {

void check_shapes(const QMatrix& q, const FieldMatrix& m) {
    if (q.size() != m.size()) throw ValidationError("matrix dimension does not match q");
    if (!(q.field() == m.field())) throw ValidationError("matrix field does not match q");
}

} // namespace

std::optional<QuadrupleWitness> member_violation(const QMatrix& q, const FieldMatrix& m) {
    check_shapes(q, m);
    const int n = q.size();
    // (q_ij - q_st) m_is m_jt != 0 iff the labels differ and both entries are
    // nonzero (the field has no zero divisors); scan quadruples in lex order.
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            for (int s = 1; s <= n; ++s) {
                if (m.at(i, s).is_zero()) continue;
                for (int t = 1; t <= n; ++t) {
                    if (q.label(i, j) == q.label(s, t)) continue;
                    if (m.at(j, t).is_zero()) continue;
                    return QuadrupleWitness{i, j, s, t};
                }
            }
        }
    }
    return std::nullopt;
}

bool is_member(const QMatrix& q, const FieldMatrix& m) {
    check_shapes(q, m);
    return m.is_invertible() && !member_violation(q, m).has_value();
}

bool satisfies_membership_equations(const QMatrix& q, const FieldMatrix& m) {
    check_shapes(q, m);
    const int n = q.size();
    const Scalar one = Scalar::one(q.field());
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Scalar& qij = q.at(i, j);
            for (int s = 1; s <= n; ++s) {
                // (q_ij - 1) m_is m_js = 0
                if (!((qij - one) * m.at(i, s) * m.at(j, s)).is_zero()) return false;
                for (int t = s + 1; t <= n; ++t) {
                    // (q_ij - q_st) m_is m_jt = (1 - q_ij q_st) m_js m_it
                    const Scalar& qst = q.at(s, t);
                    Scalar lhs = (qij - qst) * m.at(i, s) * m.at(j, t);
                    Scalar rhs = (one - qij * qst) * m.at(j, s) * m.at(i, t);
                    if (!(lhs == rhs)) return false;
                }
            }
        }
    }
    return true;
}

namespace {

// rows adjacent to each column: support of m, ascending row order
std::vector<std::vector<int>> column_support(const FieldMatrix& m) {
    const int n = m.size();
    std::vector<std::vector<int>> adj(n);
    for (int c = 1; c <= n; ++c) {
        for (int r = 1; r <= n; ++r) {
            if (!m.at(r, c).is_zero()) adj[c - 1].push_back(r);
        }
    }
    return adj;
}

struct Matcher {
    const std::vector<std::vector<int>>& adj;
    int n;
    std::vector<int> row_match; // row -> column (0 = free)
    std::vector<bool> visited;

    bool augment(int c, const std::vector<bool>& banned) {
        for (int r : adj[c - 1]) {
            if (banned[r - 1] || visited[r - 1]) continue;
            visited[r - 1] = true;
            if (row_match[r - 1] == 0 || augment(row_match[r - 1], banned)) {
                row_match[r - 1] = c;
                return true;
            }
        }
        return false;
    }

    // Can columns first..n be perfectly matched into rows outside `banned`?
    bool feasible(int first, const std::vector<bool>& banned) {
        row_match.assign(n, 0);
        for (int c = first; c <= n; ++c) {
            visited.assign(n, false);
            if (!augment(c, banned)) return false;
        }
        return true;
    }
};

} // namespace

std::optional<Perm> skeleton_any(const FieldMatrix& m) {
    const int n = m.size();
    auto adj = column_support(m);
    Matcher matcher{adj, n, {}, {}};
    std::vector<bool> used(n, false);
    std::vector<int> img(n, 0);
    // lexicographically least image array: greedily fix the least feasible row
    // for each column in order
    for (int c = 1; c <= n; ++c) {
        bool fixed = false;
        for (int r : adj[c - 1]) {
            if (used[r - 1]) continue;
            used[r - 1] = true;
            if (matcher.feasible(c + 1, used)) {
                img[c - 1] = r;
                fixed = true;
                break;
            }
            used[r - 1] = false;
        }
        if (!fixed) return std::nullopt;
    }
    return Perm(std::move(img));
}

std::vector<Perm> skeleton_all(const FieldMatrix& m, std::uint64_t cap) {
    const int n = m.size();
    auto adj = column_support(m);
    std::vector<bool> used(n, false);
    std::vector<int> img(n, 0);
    std::vector<Perm> out;
    auto rec = [&](auto&& self, int c) -> void {
        if (c > n) {
            if (out.size() >= cap) {
                throw CapExceededError("number of skeleton permutations exceeds cap " +
                                       std::to_string(cap));
            }
            out.emplace_back(img);
            return;
        }
        for (int r : adj[c - 1]) {
            if (used[r - 1]) continue;
            used[r - 1] = true;
            img[c - 1] = r;
            self(self, c + 1);
            used[r - 1] = false;
        }
    };
    rec(rec, 1);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_block_member(const BlockPartition& blocks, const FieldMatrix& m) {
    if (blocks.degree() != m.size()) throw ValidationError("block partition degree mismatch");
    const int n = m.size();
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (blocks.block_index(i) != blocks.block_index(j) && !m.at(i, j).is_zero()) {
                return false;
            }
        }
    }
    return m.is_invertible();
}

FieldMatrix embed_blocks(const BlockPartition& blocks,
                         const std::vector<FieldMatrix>& factors, Field field) {
    if (static_cast<int>(factors.size()) != blocks.count()) {
        throw ValidationError("one factor per block required");
    }
    FieldMatrix out(field, blocks.degree());
    for (std::size_t w = 0; w < factors.size(); ++w) {
        const auto& b = blocks.blocks[w];
        const FieldMatrix& f = factors[w];
        if (f.size() != static_cast<int>(b.size())) {
            throw ValidationError("factor dimension does not match its block");
        }
        if (!(f.field() == field)) throw ValidationError("factor field mismatch");
        if (!f.is_invertible()) {
            throw ValidationError("block factor " + std::to_string(w + 1) + " is singular");
        }
        for (std::size_t r = 0; r < b.size(); ++r) {
            for (std::size_t c = 0; c < b.size(); ++c) {
                out.set(b[r], b[c], f.at(static_cast<int>(r) + 1, static_cast<int>(c) + 1));
            }
        }
    }
    return out;
}

MemberDecomposition decompose_member(const QMatrix& q, const BlockPartition& blocks,
                                     const FieldMatrix& m) {
    check_shapes(q, m);
    if (blocks.degree() != q.size()) throw ValidationError("block partition degree mismatch");
    if (!is_member(q, m)) {
        throw ValidationError("matrix is not a member of the graded automorphism group");
    }
    auto pi = skeleton_any(m);
    if (!pi) throw ValidationError("member matrix has no skeleton"); // unreachable: invertible
    Perm sigma = block_coset_min(*pi, blocks);
    const int n = q.size();
    FieldMatrix g(m.field(), n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) g.set(i, j, m.at(sigma(i), j));
    }
    return MemberDecomposition{std::move(sigma), std::move(g)};
}

} // namespace qspace

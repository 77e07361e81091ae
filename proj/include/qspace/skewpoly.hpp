#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qspace/matrix.hpp"
#include "qspace/qmatrix.hpp"

namespace qspace {

// Exponent vector (e_1,...,e_n) for x_1^{e_1}...x_n^{e_n}.
using Monomial = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Monomial& m) {
    std::uint64_t d = 0;
    for (auto e : m) d += e;
    return d;
}

// Graded lexicographic: lower total degree first; within a degree x_1-heavy
// monomials first, so degree 2 in two variables reads x_1^2, x_1x_2, x_2^2.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        std::uint64_t da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a > b;
    }
};

// Element of the skew polynomial ring in normal form: a finite sum of
// monomials with nonzero coefficients, generators ordered x_1 < ... < x_n.
class SkewPoly {
  public:
    SkewPoly(Field field, int n); // zero polynomial
    static SkewPoly constant(Field field, int n, const Scalar& c);
    static SkewPoly variable(Field field, int n, int i);

    int vars() const { return n_; }
    Field field() const { return field_; }
    bool is_zero() const { return terms_.empty(); }
    std::uint64_t degree() const; // largest total degree; 0 for the zero poly

    void add_term(const Monomial& mono, const Scalar& c);
    const std::map<Monomial, Scalar, GrlexLess>& terms() const { return terms_; }

    SkewPoly operator+(const SkewPoly& o) const;
    SkewPoly operator-(const SkewPoly& o) const;
    SkewPoly scaled(const Scalar& c) const;
    bool operator==(const SkewPoly& o) const;

    std::string str() const;

  private:
    Field field_;
    int n_;
    std::map<Monomial, Scalar, GrlexLess> terms_;
};

inline constexpr std::uint64_t kDefaultDegreeCap = 8;

// Product in normal form. Reordering x^a · x^b contributes the coefficient
// twist prod_{i<j} q_ij^{b_i a_j}: each x_j of the left factor crosses each
// x_i (i < j) of the right factor via x_j x_i = q_ij x_i x_j.
SkewPoly normal_multiply(const QMatrix& q, const SkewPoly& f, const SkewPoly& g,
                         std::uint64_t degree_cap = kDefaultDegreeCap);

// Substitute x_i -> sum_j m_ij x_j and renormalize, expanding monomial
// factors left to right.
SkewPoly apply_linear_map(const FieldMatrix& m, const SkewPoly& f, const QMatrix& q,
                          std::uint64_t degree_cap = kDefaultDegreeCap);

// Ground-truth relation check: the substitution x_i -> sum_j m_ij x_j kills
// every defining relator x_j x_i - q_ij x_i x_j. Together with invertibility
// this characterizes graded automorphism group membership.
bool relations_preserved(const QMatrix& q, const FieldMatrix& m);

// All monomials of total degree d in n variables, graded-lex order.
struct GradedPiece {
    int degree;
    std::vector<Monomial> basis;
};

GradedPiece graded_basis(int n, int d);

} // namespace qspace

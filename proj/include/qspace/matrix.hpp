#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qspace/perm.hpp"
#include "qspace/scalar.hpp"

namespace qspace {

// Dense square matrix over a fixed scalar field, 1-based indexing.
class FieldMatrix {
  public:
    FieldMatrix(Field field, int n); // zero matrix
    static FieldMatrix identity(Field field, int n);
    static FieldMatrix from_rows(Field field, const std::vector<std::vector<Scalar>>& rows);

    int size() const { return n_; }
    Field field() const { return field_; }

    const Scalar& at(int i, int j) const { return entries_[idx(i, j)]; }
    void set(int i, int j, Scalar v);

    FieldMatrix operator*(const FieldMatrix& o) const;
    bool operator==(const FieldMatrix& o) const;
    FieldMatrix transpose() const;

    Scalar determinant() const;
    bool is_invertible() const { return !determinant().is_zero(); }
    FieldMatrix inverse() const; // throws ValidationError when singular

    nlohmann::json to_json() const;
    static FieldMatrix from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static FieldMatrix load(const std::string& path);
    std::string str() const;

  private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j - 1);
    }
    Field field_;
    int n_;
    std::vector<Scalar> entries_;
};

// Matrix of the permutation's graded automorphism: column j carries a single 1
// in row pi(j), so the matrix sends the j-th coordinate vector to the pi(j)-th.
FieldMatrix permutation_matrix(const Perm& pi, Field field);

} // namespace qspace

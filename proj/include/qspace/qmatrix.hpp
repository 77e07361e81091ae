#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qspace/scalar.hpp"

namespace qspace {

// Parameter matrix q of a multi-parameter quantum affine space: an n x n
// matrix over k* with q_ii = 1 and q_ij * q_ji = 1. Indices are 1-based
// throughout the public surface.
class QMatrix {
public:
    // Validates the defining constraints; throws ValidationError naming the
    // offending entry otherwise.
    QMatrix(Field field, int n, std::vector<Scalar> entries_row_major);
    static QMatrix from_rows(const std::vector<std::vector<Scalar>>& rows);

    int size() const { return n_; }
    const Field& field() const { return field_; }
    const Scalar& at(int i, int j) const { return entries_[idx(i, j)]; }

    // Equality-class id of entry (i, j): label(i,j) == label(s,t) iff
    // q_ij == q_st. Ids are assigned in row-major first-appearance order.
    int label(int i, int j) const { return labels_[idx(i, j)]; }

    bool rows_equal(int i, int j) const;

    bool operator==(const QMatrix& o) const;

    nlohmann::json to_json() const;
    static QMatrix from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static QMatrix load(const std::string& path);

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
    }

    Field field_;
    int n_;
    std::vector<Scalar> entries_;
    std::vector<int> labels_;
};

// The partition of {1,...,n} grouping indices with identical q-rows,
// ordered by minimum element; blocks are sorted index lists.
struct BlockPartition {
    std::vector<std::vector<int>> blocks;
    std::vector<int> block_of; // block_of[i-1] = 0-based block index of point i

    int count() const { return static_cast<int>(blocks.size()); }
    int block_index(int point) const { return block_of[point - 1]; }
    int degree() const { return static_cast<int>(block_of.size()); }
    bool singletons_only() const;
    std::vector<int> block_sizes() const;
};

BlockPartition block_decomposition(const QMatrix& q);

Field field_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const Field& f);

} // namespace qspace

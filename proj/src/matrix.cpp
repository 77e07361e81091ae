#include "qspace/matrix.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "qspace/errors.hpp"
#include "qspace/qmatrix.hpp"

namespace qspace {

FieldMatrix::FieldMatrix(Field field, int n)
    : field_(field), n_(n), entries_(static_cast<std::size_t>(n) * n, Scalar::zero(field)) {
    if (n < 1) throw ValidationError("matrix dimension must be >= 1");
}

FieldMatrix FieldMatrix::identity(Field field, int n) {
    FieldMatrix m(field, n);
    for (int i = 1; i <= n; ++i) m.set(i, i, Scalar::one(field));
    return m;
}

FieldMatrix FieldMatrix::from_rows(Field field, const std::vector<std::vector<Scalar>>& rows) {
    const int n = static_cast<int>(rows.size());
    FieldMatrix m(field, n);
    for (int i = 1; i <= n; ++i) {
        if (static_cast<int>(rows[i - 1].size()) != n) {
            throw ValidationError("matrix rows must all have length n");
        }
        for (int j = 1; j <= n; ++j) m.set(i, j, rows[i - 1][j - 1]);
    }
    return m;
}

void FieldMatrix::set(int i, int j, Scalar v) {
    if (!(v.field() == field_)) throw ValidationError("matrix entry from wrong field");
    entries_[idx(i, j)] = std::move(v);
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
    if (n_ != o.n_ || !(field_ == o.field_)) {
        throw ValidationError("matrix product requires matching shape and field");
    }
    FieldMatrix out(field_, n_);
    for (int i = 1; i <= n_; ++i) {
        for (int k = 1; k <= n_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 1; j <= n_; ++j) {
                const Scalar& b = o.at(k, j);
                if (b.is_zero()) continue;
                out.entries_[out.idx(i, j)] = out.at(i, j) + a * b;
            }
        }
    }
    return out;
}

bool FieldMatrix::operator==(const FieldMatrix& o) const {
    return n_ == o.n_ && field_ == o.field_ && entries_ == o.entries_;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix out(field_, n_);
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) out.set(j, i, at(i, j));
    }
    return out;
}

Scalar FieldMatrix::determinant() const {
    // exact Gaussian elimination; pivot on the first nonzero entry
    std::vector<Scalar> a = entries_;
    auto ref = [&](int i, int j) -> Scalar& { return a[idx(i, j)]; };
    Scalar det = Scalar::one(field_);
    for (int col = 1; col <= n_; ++col) {
        int pivot = 0;
        for (int row = col; row <= n_; ++row) {
            if (!ref(row, col).is_zero()) {
                pivot = row;
                break;
            }
        }
        if (pivot == 0) return Scalar::zero(field_);
        if (pivot != col) {
            for (int j = col; j <= n_; ++j) std::swap(ref(pivot, j), ref(col, j));
            det = -det;
        }
        det = det * ref(col, col);
        Scalar inv = ref(col, col).inverse();
        for (int row = col + 1; row <= n_; ++row) {
            if (ref(row, col).is_zero()) continue;
            Scalar factor = ref(row, col) * inv;
            for (int j = col; j <= n_; ++j) {
                ref(row, j) = ref(row, j) - factor * ref(col, j);
            }
        }
    }
    return det;
}

FieldMatrix FieldMatrix::inverse() const {
    std::vector<Scalar> a = entries_;
    FieldMatrix inv = identity(field_, n_);
    auto ref = [&](int i, int j) -> Scalar& { return a[idx(i, j)]; };
    for (int col = 1; col <= n_; ++col) {
        int pivot = 0;
        for (int row = col; row <= n_; ++row) {
            if (!ref(row, col).is_zero()) {
                pivot = row;
                break;
            }
        }
        if (pivot == 0) throw ValidationError("matrix is singular");
        if (pivot != col) {
            for (int j = 1; j <= n_; ++j) {
                std::swap(ref(pivot, j), ref(col, j));
                std::swap(inv.entries_[inv.idx(pivot, j)], inv.entries_[inv.idx(col, j)]);
            }
        }
        Scalar scale = ref(col, col).inverse();
        for (int j = 1; j <= n_; ++j) {
            ref(col, j) = ref(col, j) * scale;
            inv.entries_[inv.idx(col, j)] = inv.at(col, j) * scale;
        }
        for (int row = 1; row <= n_; ++row) {
            if (row == col || ref(row, col).is_zero()) continue;
            Scalar factor = ref(row, col);
            for (int j = 1; j <= n_; ++j) {
                ref(row, j) = ref(row, j) - factor * ref(col, j);
                inv.entries_[inv.idx(row, j)] =
                    inv.at(row, j) - factor * inv.at(col, j);
            }
        }
    }
    return inv;
}

nlohmann::json FieldMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 1; i <= n_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 1; j <= n_; ++j) row.push_back(at(i, j).str());
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"field", field_to_json(field_)}, {"n", n_}, {"entries", rows}};
}

FieldMatrix FieldMatrix::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("entries")) {
        throw ValidationError("matrix JSON must carry \"field\" and \"entries\"");
    }
    Field field = field_from_json(j.at("field"));
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.empty()) {
        throw ValidationError("matrix \"entries\" must be a non-empty array of rows");
    }
    std::vector<std::vector<Scalar>> parsed;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != rows.size()) {
            throw ValidationError("matrix \"entries\" must be square");
        }
        std::vector<Scalar> out;
        for (const auto& cell : row) {
            if (!cell.is_string()) throw ValidationError("matrix entries must be strings");
            out.push_back(Scalar::parse(cell.get<std::string>(), field));
        }
        parsed.push_back(std::move(out));
    }
    return from_rows(field, parsed);
}

void FieldMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << to_json().dump(2) << "\n";
}

FieldMatrix FieldMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("json parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

std::string FieldMatrix::str() const {
    std::string out = "[";
    for (int i = 1; i <= n_; ++i) {
        out += i == 1 ? "[" : ", [";
        for (int j = 1; j <= n_; ++j) {
            if (j > 1) out += ", ";
            out += at(i, j).str();
        }
        out += "]";
    }
    out += "]";
    return out;
}

FieldMatrix permutation_matrix(const Perm& pi, Field field) {
    FieldMatrix m(field, pi.degree());
    for (int j = 1; j <= pi.degree(); ++j) m.set(pi(j), j, Scalar::one(field));
    return m;
}

} // namespace qspace

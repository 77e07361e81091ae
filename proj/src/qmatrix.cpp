#include "qspace/qmatrix.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace qspace {

namespace {

std::vector<int> entry_labels(int n, const std::vector<Scalar>& entries) {
    std::map<Scalar, int> ids;
    std::vector<int> labels(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        auto [it, inserted] = ids.emplace(entries[k], static_cast<int>(ids.size()));
        labels[k] = it->second;
    }
    (void)n;
    return labels;
}

} // namespace

QMatrix::QMatrix(Field field, int n, std::vector<Scalar> entries_row_major)
    : field_(field), n_(n), entries_(std::move(entries_row_major)) {
    if (n_ < 1) throw ValidationError("q-matrix dimension must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(n_) * n_) {
        throw ValidationError("q-matrix entry count does not match dimension");
    }
    for (const Scalar& e : entries_) {
        if (e.field() != field_) throw ValidationError("q-matrix entry field mismatch");
    }
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) {
            const Scalar& v = at(i, j);
            if (v.is_zero()) {
                throw ValidationError("zero q-matrix entry at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            }
            if (i == j && !v.is_one()) {
                throw ValidationError("diagonal entry q_" + std::to_string(i) +
                                      std::to_string(i) + " != 1");
            }
        }
    }
    for (int i = 1; i <= n_; ++i) {
        for (int j = i + 1; j <= n_; ++j) {
            if (!(at(i, j) * at(j, i)).is_one()) {
                throw ValidationError("reciprocal constraint violated at (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      "): q_ij * q_ji != 1");
            }
        }
    }
    labels_ = entry_labels(n_, entries_);
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty()) throw ValidationError("q-matrix dimension must be >= 1");
    int n = static_cast<int>(rows.size());
    std::vector<Scalar> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) {
            throw ValidationError("q-matrix rows must all have length n");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    Field field = flat.front().field(); // read before the move below
    return QMatrix(field, n, std::move(flat));
}

bool QMatrix::rows_equal(int i, int j) const {
    for (int s = 1; s <= n_; ++s) {
        if (label(i, s) != label(j, s)) return false;
    }
    return true;
}

bool QMatrix::operator==(const QMatrix& o) const {
    return field_ == o.field_ && n_ == o.n_ && entries_ == o.entries_;
}

bool BlockPartition::singletons_only() const {
    for (const auto& b : blocks) {
        if (b.size() != 1) return false;
    }
    return true;
}

std::vector<int> BlockPartition::block_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(blocks.size());
    for (const auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
    return sizes;
}

BlockPartition block_decomposition(const QMatrix& q) {
    const int n = q.size();
    // Group rows by their label vector; scanning i ascending yields blocks
    // ordered by minimum element, with members already sorted.
    std::map<std::vector<int>, int> seen;
    BlockPartition part;
    part.block_of.assign(n, -1);
    for (int i = 1; i <= n; ++i) {
        std::vector<int> row(n);
        for (int s = 1; s <= n; ++s) row[s - 1] = q.label(i, s);
        auto [it, inserted] = seen.emplace(std::move(row), part.count());
        if (inserted) part.blocks.emplace_back();
        part.blocks[it->second].push_back(i);
        part.block_of[i - 1] = it->second;
    }
    return part;
}

Field field_from_json(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "rational") return Field::rationals();
    if (j.is_object() && j.contains("prime") && j["prime"].is_number_unsigned()) {
        return Field::prime(j["prime"].get<std::uint64_t>());
    }
    throw ValidationError("field must be \"rational\" or {\"prime\": p}");
}

nlohmann::json field_to_json(const Field& f) {
    if (f.is_rational()) return "rational";
    return nlohmann::json{{"prime", f.modulus()}};
}

nlohmann::json QMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 1; i <= n_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 1; j <= n_; ++j) row.push_back(at(i, j).str());
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"field", field_to_json(field_)}, {"n", n_}, {"entries", rows}};
}

QMatrix QMatrix::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("n") || !j.contains("entries")) {
        throw ValidationError("q-matrix json requires \"field\", \"n\" and \"entries\"");
    }
    Field f = field_from_json(j["field"]);
    if (!j["n"].is_number_integer()) throw ValidationError("\"n\" must be an integer");
    int n = j["n"].get<int>();
    if (n < 1) throw ValidationError("\"n\" must be >= 1");
    const auto& rows = j["entries"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        throw ValidationError("\"entries\" must be an array of n rows");
    }
    std::vector<Scalar> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw ValidationError("each entries row must be an array of n strings");
        }
        for (const auto& cell : row) {
            if (!cell.is_string()) throw ValidationError("entries must be scalar strings");
            flat.push_back(Scalar::parse(cell.get<std::string>(), f));
        }
    }
    return QMatrix(f, n, std::move(flat));
}

void QMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << to_json().dump(2) << "\n";
}

QMatrix QMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open q-matrix file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("json parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace qspace

#pragma once

#include <string>
#include <vector>

#include "qspace/matrix.hpp"
#include "qspace/qmatrix.hpp"

inline std::string data_path(const std::string& name) {
    return std::string(QSPACE_DATA_DIR) + "/" + name;
}

inline qspace::QMatrix load_q(const std::string& name) {
    return qspace::QMatrix::load(data_path(name));
}

inline qspace::QMatrix make_q(qspace::Field f,
                              const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<qspace::Scalar>> parsed;
    for (const auto& row : rows) {
        std::vector<qspace::Scalar> out;
        for (const auto& cell : row) out.push_back(qspace::Scalar::parse(cell, f));
        parsed.push_back(std::move(out));
    }
    return qspace::QMatrix::from_rows(parsed);
}

inline qspace::FieldMatrix make_m(qspace::Field f,
                                  const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<qspace::Scalar>> parsed;
    for (const auto& row : rows) {
        std::vector<qspace::Scalar> out;
        for (const auto& cell : row) out.push_back(qspace::Scalar::parse(cell, f));
        parsed.push_back(std::move(out));
    }
    return qspace::FieldMatrix::from_rows(f, parsed);
}

inline qspace::QMatrix all_ones_q(int n, qspace::Field f = qspace::Field::rationals()) {
    std::vector<std::vector<std::string>> rows(n, std::vector<std::string>(n, "1"));
    return make_q(f, rows);
}

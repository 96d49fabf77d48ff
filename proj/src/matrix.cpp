#include "actsig/matrix.hpp"

#include "actsig/errors.hpp"

namespace actsig {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        return {};
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) {
            throw ShapeError("ragged matrix: row " + std::to_string(r) + " has " +
                             std::to_string(rows[r].size()) + " entries, expected " +
                             std::to_string(m.cols()));
        }
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

} // namespace actsig

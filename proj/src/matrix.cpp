#include "leaders/matrix.hpp"

#include <algorithm>

#include "leaders/error.hpp"

namespace leaders {

Matrix hconcat(std::span<const Matrix* const> blocks) {
    if (blocks.empty()) return {};
    const std::size_t rows = blocks.front()->rows();
    std::size_t cols = 0;
    for (const Matrix* b : blocks) {
        if (b->rows() != rows) throw InvalidArgument("hconcat: row count mismatch");
        cols += b->cols();
    }
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto dst = out.row(r).begin();
        for (const Matrix* b : blocks) {
            auto src = b->row(r);
            dst = std::copy(src.begin(), src.end(), dst);
        }
    }
    return out;
}

}  // namespace leaders

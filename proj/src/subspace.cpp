#include "operadcalc/subspace.hpp"

namespace operadcalc {

std::vector<std::vector<Scalar>> nullspace_of_vectors(
    const std::vector<std::string>& ambient, const std::vector<FormalSum>& vectors,
    const std::function<void()>& poll) {
    // Eliminate [v_i | e_i]; rows whose ambient part vanishes carry a kernel
    // combination in the augmented columns. Ambient columns come first, so
    // they are always eliminated preferentially.
    const int n = static_cast<int>(ambient.size());
    const int m = static_cast<int>(vectors.size());
    std::vector<std::string> cols = ambient;
    cols.reserve(n + m);
    for (int j = 0; j < m; ++j) cols.push_back("#aug:" + std::to_string(j));
    SpanBuilder b(std::move(cols));
    for (int j = 0; j < m; ++j) {
        if (poll && j % 32 == 0) poll();
        SparseRow row = b.to_row(vectors[j]);
        row.emplace_back(n + j, Scalar(1));
        b.insert_row(row);
    }
    std::vector<std::vector<Scalar>> out;
    for (const auto& [pivot, row] : b.pivot_rows()) {
        if (pivot < n) continue;
        std::vector<Scalar> combo(m, Scalar(0));
        for (const auto& [col, c] : row) combo[col - n] = c;
        out.push_back(std::move(combo));
    }
    return out;
}

}  // namespace operadcalc

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qcdual/rational.hpp"

namespace qcdual {

// Exact solver for systems of linear congruences
//
//     sum_j A[i][j] * c_j == b_i  (mod m_i),   c integer,
//
// by appending one slack column per row and putting M = [A | diag(m)] into
// column echelon form H = M*U with U unimodular. Solving is then forward
// substitution with divisibility checks; the zero columns of H yield the
// kernel lattice of the c-variables, which is used to reduce solutions to a
// canonical representative (so identical systems always report identical
// coefficient vectors).
class CongruenceSolver {
public:
    CongruenceSolver(std::vector<std::vector<BigInt>> a, std::vector<BigInt> moduli)
        : rows_(a.size()), vars_(rows_ ? a[0].size() : 0) {
        size_t cols = vars_ + rows_;
        h_.assign(rows_, std::vector<BigInt>(cols, 0));
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < vars_; ++j) h_[i][j] = a[i][j];
            h_[i][vars_ + i] = moduli[i];
        }
        u_.assign(cols, std::vector<BigInt>(cols, 0));
        for (size_t j = 0; j < cols; ++j) u_[j][j] = 1;
        echelonize();
        extract_kernel();
    }

    // Particular solution of A c == b (mod m), canonically reduced, or
    // nullopt when the system is unsolvable.
    std::optional<std::vector<BigInt>> solve(const std::vector<BigInt>& b) const {
        size_t cols = vars_ + rows_;
        std::vector<BigInt> z(cols, 0);
        for (size_t i = 0; i < rows_; ++i) {
            BigInt residual = b[i];
            for (size_t j = 0; j < cols; ++j) residual -= h_[i][j] * z[j];
            auto pivot = pivot_col_[i];
            if (!pivot) {
                if (residual != 0) return std::nullopt;
                continue;
            }
            const BigInt& p = h_[i][*pivot];
            if (residual % p != 0) return std::nullopt;
            z[*pivot] = residual / p;
        }
        std::vector<BigInt> c(vars_, 0);
        for (size_t j = 0; j < vars_; ++j)
            for (size_t k = 0; k < cols; ++k) c[j] += u_[j][k] * z[k];
        reduce_by_kernel(c);
        return c;
    }

    // Basis of {c : A c == 0 (mod m)}, in row-echelon (HNF) form.
    const std::vector<std::vector<BigInt>>& kernel() const { return kernel_; }

private:
    void echelonize() {
        size_t cols = vars_ + rows_;
        size_t next_col = 0;
        pivot_col_.assign(rows_, std::nullopt);
        for (size_t i = 0; i < rows_ && next_col < cols; ++i) {
            // gcd-eliminate row i across columns >= next_col
            for (;;) {
                size_t best = cols;
                for (size_t j = next_col; j < cols; ++j)
                    if (h_[i][j] != 0 && (best == cols || abs(h_[i][j]) < abs(h_[i][best]))) best = j;
                if (best == cols) break; // row exhausted, no pivot
                bool clean = true;
                for (size_t j = next_col; j < cols; ++j) {
                    if (j == best || h_[i][j] == 0) continue;
                    BigInt q = h_[i][j] / h_[i][best]; // truncated division shrinks |entry|
                    if (q != 0) col_axpy(j, best, q);
                    if (h_[i][j] != 0) clean = false;
                }
                if (clean) {
                    if (h_[i][best] < 0) col_negate(best);
                    col_swap(best, next_col);
                    pivot_col_[i] = next_col;
                    ++next_col;
                    break;
                }
            }
        }
    }

    void extract_kernel() {
        size_t cols = vars_ + rows_;
        std::vector<bool> is_pivot(cols, false);
        for (auto p : pivot_col_)
            if (p) is_pivot[*p] = true;
        std::vector<std::vector<BigInt>> gens;
        for (size_t j = 0; j < cols; ++j) {
            if (is_pivot[j]) continue;
            // column j of H is zero beyond echelon => U column j is in the kernel
            std::vector<BigInt> v(vars_);
            bool nonzero = false;
            for (size_t r = 0; r < vars_; ++r) {
                v[r] = u_[r][j];
                nonzero = nonzero || v[r] != 0;
            }
            if (nonzero) gens.push_back(std::move(v));
        }
        kernel_ = row_hnf(std::move(gens));
    }

    // Row Hermite form of the kernel generators (pivot entries positive,
    // entries above pivots reduced into [0, pivot)).
    static std::vector<std::vector<BigInt>> row_hnf(std::vector<std::vector<BigInt>> m) {
        if (m.empty()) return m;
        size_t cols = m[0].size();
        std::vector<std::vector<BigInt>> out;
        size_t row = 0;
        for (size_t col = 0; col < cols; ++col) {
            // gcd-combine all rows >= row on this column
            for (;;) {
                size_t best = m.size();
                for (size_t r = row; r < m.size(); ++r)
                    if (m[r][col] != 0 && (best == m.size() || abs(m[r][col]) < abs(m[best][col]))) best = r;
                if (best == m.size()) break;
                bool clean = true;
                for (size_t r = row; r < m.size(); ++r) {
                    if (r == best || m[r][col] == 0) continue;
                    BigInt q = m[r][col] / m[best][col];
                    if (q != 0)
                        for (size_t j = 0; j < cols; ++j) m[r][j] -= q * m[best][j];
                    if (m[r][col] != 0) clean = false;
                }
                if (clean) {
                    std::swap(m[best], m[row]);
                    if (m[row][col] < 0)
                        for (auto& e : m[row]) e = -e;
                    // reduce rows above into [0, pivot)
                    for (size_t r = 0; r < row; ++r) {
                        BigInt q = floor_div(m[r][col], m[row][col]);
                        if (q != 0)
                            for (size_t j = 0; j < cols; ++j) m[r][j] -= q * m[row][j];
                    }
                    ++row;
                    break;
                }
            }
        }
        m.resize(row);
        return m;
    }

    void reduce_by_kernel(std::vector<BigInt>& c) const {
        for (const auto& k : kernel_) {
            size_t p = 0;
            while (p < k.size() && k[p] == 0) ++p;
            if (p == k.size()) continue;
            BigInt q = floor_div(c[p], k[p]);
            if (q != 0)
                for (size_t j = 0; j < k.size(); ++j) c[j] -= q * k[j];
        }
    }

    void col_axpy(size_t dst, size_t src, const BigInt& q) {
        for (size_t r = 0; r < rows_; ++r) h_[r][dst] -= q * h_[r][src];
        size_t cols = vars_ + rows_;
        for (size_t r = 0; r < cols; ++r) u_[r][dst] -= q * u_[r][src];
    }
    void col_negate(size_t j) {
        for (size_t r = 0; r < rows_; ++r) h_[r][j] = -h_[r][j];
        size_t cols = vars_ + rows_;
        for (size_t r = 0; r < cols; ++r) u_[r][j] = -u_[r][j];
    }
    void col_swap(size_t a, size_t b) {
        if (a == b) return;
        for (size_t r = 0; r < rows_; ++r) std::swap(h_[r][a], h_[r][b]);
        size_t cols = vars_ + rows_;
        for (size_t r = 0; r < cols; ++r) std::swap(u_[r][a], u_[r][b]);
    }

    size_t rows_, vars_;
    std::vector<std::vector<BigInt>> h_;
    std::vector<std::vector<BigInt>> u_;
    std::vector<std::optional<size_t>> pivot_col_;
    std::vector<std::vector<BigInt>> kernel_;
};

} // namespace qcdual

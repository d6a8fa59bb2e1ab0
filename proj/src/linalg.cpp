#include "ripshom/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace ripshom {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

uint32_t mod_inverse(uint32_t a, int p) {
    // Fermat: a^(p-2) mod p
    uint64_t base = a % p, result = 1;
    int e = p - 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<uint32_t>(result);
}

}  // namespace

FpMatrix::FpMatrix(int rows, int cols, int p) : rows_(rows), cols_(cols), p_(p) {
    if (!is_prime(p)) throw validation_error("FpMatrix: modulus must be prime");
    data_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

FpMatrix FpMatrix::identity(int n, int p) {
    FpMatrix m(n, n, p);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

void FpMatrix::set(int r, int c, long long value) {
    long long v = value % p_;
    if (v < 0) v += p_;
    data_[static_cast<std::size_t>(r) * cols_ + c] = static_cast<uint32_t>(v);
}

FpMatrix FpMatrix::multiply(const FpMatrix& other) const {
    if (cols_ != other.rows_ || p_ != other.p_)
        throw inconsistency_error("FpMatrix::multiply: shape or modulus mismatch");
    FpMatrix out(rows_, other.cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const uint64_t a = at(i, k);
            if (!a) continue;
            for (int j = 0; j < other.cols_; ++j) {
                uint64_t v = out.at(i, j) + a * other.at(k, j) % p_;
                out.data_[static_cast<std::size_t>(i) * out.cols_ + j] =
                    static_cast<uint32_t>(v >= static_cast<uint64_t>(p_) ? v - p_ : v);
            }
        }
    return out;
}

bool FpMatrix::operator==(const FpMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && p_ == other.p_ &&
           data_ == other.data_;
}

bool FpMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](uint32_t v) { return v == 0; });
}

FpMatrix FpMatrix::augment_columns(const FpMatrix& other) const {
    if (rows_ != other.rows_ || p_ != other.p_)
        throw inconsistency_error("FpMatrix::augment_columns: shape or modulus mismatch");
    FpMatrix out(rows_, cols_ + other.cols_, p_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
        for (int j = 0; j < other.cols_; ++j) out.set(i, cols_ + j, other.at(i, j));
    }
    return out;
}

FpMatrix FpMatrix::column(int c) const {
    FpMatrix out(rows_, 1, p_);
    for (int i = 0; i < rows_; ++i) out.set(i, 0, at(i, c));
    return out;
}

int FpMatrix::rank() const {
    FpColumnSpace space(rows_, p_);
    std::vector<uint32_t> col(rows_);
    for (int j = 0; j < cols_; ++j) {
        for (int i = 0; i < rows_; ++i) col[i] = at(i, j);
        space.insert(col, /*tracked=*/false);
    }
    return space.dim();
}

FpMatrix FpMatrix::kernel_basis() const {
    // Reduced row echelon form; one kernel vector per free column.
    FpMatrix work = *this;
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int pr = -1;
        for (int r = row; r < rows_; ++r)
            if (work.at(r, col)) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        if (pr != row)
            for (int j = 0; j < cols_; ++j)
                std::swap(work.data_[static_cast<std::size_t>(pr) * cols_ + j],
                          work.data_[static_cast<std::size_t>(row) * cols_ + j]);
        const uint64_t f = mod_inverse(work.at(row, col), p_);
        for (int j = 0; j < cols_; ++j)
            work.set(row, j, static_cast<long long>(work.at(row, j) * f % p_));
        for (int r = 0; r < rows_; ++r) {
            if (r == row || !work.at(r, col)) continue;
            const uint64_t g = p_ - work.at(r, col);
            for (int j = 0; j < cols_; ++j)
                work.set(r, j, static_cast<long long>((work.at(r, j) + g * work.at(row, j)) % p_));
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<char> is_pivot(cols_, 0);
    for (int c : pivot_cols) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < cols_; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FpMatrix out(cols_, static_cast<int>(free_cols.size()), p_);
    for (int t = 0; t < static_cast<int>(free_cols.size()); ++t) {
        const int f = free_cols[t];
        out.set(f, t, 1);
        for (int r = 0; r < static_cast<int>(pivot_cols.size()); ++r) {
            const uint32_t v = work.at(r, f);
            if (v) out.set(pivot_cols[r], t, static_cast<long long>(p_ - v));
        }
    }
    return out;
}

FpMatrix FpMatrix::inverse() const {
    if (rows_ != cols_) throw inconsistency_error("FpMatrix::inverse: not square");
    const int n = rows_;
    FpMatrix work = *this;
    FpMatrix inv = identity(n, p_);
    auto row_scale = [&](FpMatrix& m, int r, uint64_t f) {
        for (int j = 0; j < n; ++j) m.set(r, j, static_cast<long long>(m.at(r, j) * f % p_));
    };
    auto row_axpy = [&](FpMatrix& m, int dst, int src, uint64_t f) {
        for (int j = 0; j < n; ++j)
            m.set(dst, j, static_cast<long long>((m.at(dst, j) + f * m.at(src, j)) % p_));
    };
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (work.at(r, col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw inconsistency_error("FpMatrix::inverse: singular matrix");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(work.data_[static_cast<std::size_t>(pivot) * n + j],
                          work.data_[static_cast<std::size_t>(col) * n + j]);
                std::swap(inv.data_[static_cast<std::size_t>(pivot) * n + j],
                          inv.data_[static_cast<std::size_t>(col) * n + j]);
            }
        }
        const uint64_t f = mod_inverse(work.at(col, col), p_);
        row_scale(work, col, f);
        row_scale(inv, col, f);
        for (int r = 0; r < n; ++r) {
            if (r == col || !work.at(r, col)) continue;
            const uint64_t g = p_ - work.at(r, col);
            row_axpy(work, r, col, g);
            row_axpy(inv, r, col, g);
        }
    }
    return inv;
}

FpColumnSpace::FpColumnSpace(int rows, int p) : rows_(rows), p_(p) {}

void FpColumnSpace::reduce(std::vector<uint32_t>& v, std::vector<uint32_t>* combo) const {
    for (const auto& c : pivots_) {
        const uint32_t coeff = v[c.pivot];
        if (!coeff) continue;
        // v -= coeff * c.value  (c.value has unit pivot)
        for (int i = 0; i < rows_; ++i) {
            uint64_t sub = static_cast<uint64_t>(coeff) * c.value[i] % p_;
            v[i] = static_cast<uint32_t>((v[i] + p_ - sub) % p_);
        }
        if (combo)
            for (std::size_t t = 0; t < c.combo.size(); ++t) {
                uint64_t sub = static_cast<uint64_t>(coeff) * c.combo[t] % p_;
                (*combo)[t] = static_cast<uint32_t>(((*combo)[t] + p_ - sub) % p_);
            }
    }
}

int FpColumnSpace::insert(std::vector<uint32_t> v, bool tracked) {
    std::vector<uint32_t> combo;
    if (tracked) {
        combo.assign(tracked_ + 1, 0);
        combo[tracked_] = 1;
        ++tracked_;
    }
    reduce(v, tracked ? &combo : nullptr);
    int pivot = -1;
    for (int i = 0; i < rows_; ++i)
        if (v[i]) {
            pivot = i;
            break;
        }
    if (pivot < 0) return -1;
    const uint64_t f = mod_inverse(v[pivot], p_);
    for (int i = 0; i < rows_; ++i) v[i] = static_cast<uint32_t>(v[i] * f % p_);
    for (auto& x : combo) x = static_cast<uint32_t>(x * f % p_);
    pivots_.push_back({pivot, std::move(v), std::move(combo)});
    return static_cast<int>(pivots_.size()) - 1;
}

bool FpColumnSpace::contains(std::vector<uint32_t> v) const {
    reduce(v, nullptr);
    return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

std::vector<uint32_t> FpColumnSpace::coordinates(std::vector<uint32_t> v) const {
    std::vector<uint32_t> w = std::move(v);
    std::vector<uint32_t> acc(tracked_, 0);
    for (const auto& c : pivots_) {
        const uint32_t coeff = w[c.pivot];
        if (!coeff) continue;
        for (int i = 0; i < rows_; ++i) {
            uint64_t sub = static_cast<uint64_t>(coeff) * c.value[i] % p_;
            w[i] = static_cast<uint32_t>((w[i] + p_ - sub) % p_);
        }
        for (std::size_t t = 0; t < c.combo.size(); ++t) {
            uint64_t add = static_cast<uint64_t>(coeff) * c.combo[t] % p_;
            acc[t] = static_cast<uint32_t>((acc[t] + add) % p_);
        }
    }
    if (!std::all_of(w.begin(), w.end(), [](uint32_t x) { return x == 0; })) return {};
    return acc;
}

std::vector<long long> smith_normal_form(std::vector<std::vector<long long>> m) {
    std::vector<long long> factors;
    if (m.empty() || m[0].empty()) return factors;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int top = 0;
    while (top < rows && top < cols) {
        // locate smallest nonzero entry in the remaining block
        int pr = -1, pc = -1;
        long long best = 0;
        for (int i = top; i < rows; ++i)
            for (int j = top; j < cols; ++j)
                if (m[i][j] != 0 && (pr < 0 || std::llabs(m[i][j]) < best)) {
                    best = std::llabs(m[i][j]);
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        std::swap(m[top], m[pr]);
        for (int i = 0; i < rows; ++i) std::swap(m[i][top], m[i][pc]);

        bool clean = true;
        for (int i = top + 1; i < rows; ++i) {
            if (m[i][top] == 0) continue;
            const long long q = m[i][top] / m[top][top];
            for (int j = top; j < cols; ++j) m[i][j] -= q * m[top][j];
            if (m[i][top] != 0) clean = false;
        }
        for (int j = top + 1; j < cols; ++j) {
            if (m[top][j] == 0) continue;
            const long long q = m[top][j] / m[top][top];
            for (int i = top; i < rows; ++i) m[i][j] -= q * m[i][top];
            if (m[top][j] != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders now exist; re-pivot

        // pivot must divide every remaining entry for true invariant factors
        bool divides = true;
        for (int i = top + 1; i < rows && divides; ++i)
            for (int j = top + 1; j < cols && divides; ++j)
                if (m[i][j] % m[top][top] != 0) {
                    // fold that row into the pivot row and restart this pivot
                    for (int c = top; c < cols; ++c) m[top][c] += m[i][c];
                    divides = false;
                }
        if (!divides) continue;
        factors.push_back(std::llabs(m[top][top]));
        ++top;
    }
    return factors;
}

int integer_rank(const std::vector<std::vector<long long>>& m) {
    return static_cast<int>(smith_normal_form(m).size());
}

}  // namespace ripshom

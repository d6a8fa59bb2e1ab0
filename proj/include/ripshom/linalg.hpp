#pragma once

#include <cstdint>
#include <vector>

#include "ripshom/common.hpp"

namespace ripshom {

// Dense matrix over GF(p), p prime. Sized for desk-scale homology work;
// all reductions use a fixed pivot order so results are reproducible.
class FpMatrix {
  public:
    FpMatrix() = default;
    FpMatrix(int rows, int cols, int p);

    static FpMatrix identity(int n, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int prime() const { return p_; }

    uint32_t at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    void set(int r, int c, long long value);

    FpMatrix multiply(const FpMatrix& other) const;
    bool operator==(const FpMatrix& other) const;

    int rank() const;

    // Basis of the null space, one column per basis vector.
    FpMatrix kernel_basis() const;

    // Inverse of a square invertible matrix; throws inconsistency_error if
    // the matrix is singular.
    FpMatrix inverse() const;

    bool is_zero() const;

    // Appends the columns of `other` (same row count) to the right.
    FpMatrix augment_columns(const FpMatrix& other) const;

    FpMatrix column(int c) const;

  private:
    int rows_ = 0, cols_ = 0, p_ = 2;
    std::vector<uint32_t> data_;
};

bool is_prime(int p);

// Column-space membership solver over GF(p): echelonizes the columns it is
// fed, in order, and can then express further vectors in terms of the
// TRACKED ones. Untracked inserts only extend the span (no coefficient
// bookkeeping), which keeps bulk rank sweeps linear in the data.
class FpColumnSpace {
  public:
    explicit FpColumnSpace(int rows, int p);

    // Reduces `v` against the space; if a nonzero residue remains, adds it
    // and returns the new column's index, else returns -1.
    int insert(std::vector<uint32_t> v, bool tracked = true);

    // True when v lies in the current span.
    bool contains(std::vector<uint32_t> v) const;

    // Expresses v modulo the untracked columns as a combination of the
    // tracked ones; empty result if v is outside the span. Coefficients
    // indexed by tracked insertion order.
    std::vector<uint32_t> coordinates(std::vector<uint32_t> v) const;

    int dim() const { return static_cast<int>(pivots_.size()); }
    int tracked_count() const { return tracked_; }

  private:
    int rows_, p_;
    struct Column {
        int pivot;
        std::vector<uint32_t> value;
        std::vector<uint32_t> combo;  // expression in tracked columns; may be short
    };
    std::vector<Column> pivots_;  // kept in increasing pivot order of insertion
    int tracked_ = 0;

    void reduce(std::vector<uint32_t>& v, std::vector<uint32_t>* combo) const;
};

// Smith normal form of an integer matrix: the invariant factors
// d1 | d2 | ... (positive, possibly empty). Entries must stay within
// long long during reduction; desk-scale relator matrices do.
std::vector<long long> smith_normal_form(std::vector<std::vector<long long>> m);

// Rank of an integer matrix (over Q), computed from the Smith form.
int integer_rank(const std::vector<std::vector<long long>>& m);

}  // namespace ripshom

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ttcalc/scalar.hpp"

namespace ttcalc {

struct Entry {
    std::uint32_t index;
    Scalar value;
};

/// Sparse column vector: entries sorted by index, no stored zeros.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim) : dim_(dim) {}

    static Vector unit(std::size_t dim, std::size_t i, const Field& field);
    static Vector from_dense(std::span<const Scalar> values);

    std::size_t dim() const { return dim_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }
    std::uint32_t leading_index() const { return entries_.front().index; }
    const Scalar& leading_value() const { return entries_.front().value; }

    /// Pointer to the stored value at i, or nullptr when the coordinate is zero.
    const Scalar* find(std::size_t i) const;
    Scalar at(std::size_t i, const Field& field) const;

    /// Appends an entry; indices must be strictly increasing. Zeros are dropped.
    void push_back(std::uint32_t index, Scalar value);

    /// this += c * x
    Vector& axpy(const Scalar& c, const Vector& x);
    Vector& operator+=(const Vector& x);
    Vector& operator-=(const Vector& x);
    Vector& operator*=(const Scalar& c);
    Vector operator-() const;
    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(const Scalar& c, Vector a) { return a *= c; }

    /// Concatenation of coordinates: (this, tail).
    Vector concat(const Vector& tail) const;
    /// Coordinates [offset, offset + len) as a vector of dimension len.
    Vector slice(std::size_t offset, std::size_t len) const;
    /// The same entries viewed in a space of dimension dim, shifted by offset.
    Vector embedded(std::size_t dim, std::size_t offset) const;

    std::vector<Scalar> to_dense(const Field& field) const;

    friend bool operator==(const Vector& a, const Vector& b) {
        if (a.dim_ != b.dim_ || a.entries_.size() != b.entries_.size()) return false;
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            if (a.entries_[k].index != b.entries_[k].index || !(a.entries_[k].value == b.entries_[k].value))
                return false;
        return true;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Entry> entries_;
};

/// Dense scratch space for summing many sparse contributions into one vector.
class Accumulator {
public:
    explicit Accumulator(std::size_t dim);
    void add(std::uint32_t index, const Scalar& value);
    void add(const Scalar& c, const Vector& x);
    /// Returns the accumulated vector and resets the workspace.
    Vector take();

private:
    std::size_t dim_;
    std::vector<Scalar> values_;
    std::vector<char> used_;
    std::vector<std::uint32_t> touched_;
};

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Scalar value;
};

/**
 * Sparse matrix over a field, stored by columns.
 *
 * Columns are sparse Vectors of dimension rows(); the coordinate list view
 * returned by triplets() is sorted by (row, column).
 */
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static SparseMatrix identity(std::size_t n, const Field& field);
    /// Duplicate positions are summed; zero sums are dropped.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
    static SparseMatrix from_columns(std::size_t rows, std::vector<Vector> columns);
    static SparseMatrix from_dense(const std::vector<std::vector<Scalar>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }
    std::size_t nnz() const;
    bool is_zero() const;

    const Vector& column(std::size_t j) const { return cols_[j]; }
    const std::vector<Vector>& columns() const { return cols_; }
    void set_column(std::size_t j, Vector v);
    std::vector<Triplet> triplets() const;
    const Scalar* find(std::size_t i, std::size_t j) const { return cols_[j].find(i); }

    Vector apply(const Vector& x) const;
    SparseMatrix transpose() const;
    SparseMatrix operator*(const SparseMatrix& o) const;
    SparseMatrix& operator+=(const SparseMatrix& o);
    SparseMatrix& operator-=(const SparseMatrix& o);
    SparseMatrix& operator*=(const Scalar& c);
    SparseMatrix operator-() const;
    friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) { return a += b; }
    friend SparseMatrix operator-(SparseMatrix a, const SparseMatrix& b) { return a -= b; }
    friend SparseMatrix operator*(const Scalar& c, SparseMatrix a) { return a *= c; }

    /// Copies `block` into this matrix with its (0,0) entry at (row, col).
    /// Existing entries in the target region are overwritten by addition.
    void add_block(std::size_t row, std::size_t col, const SparseMatrix& block);

    /// Rows [r0, r0 + nr) and columns [c0, c0 + nc).
    SparseMatrix submatrix(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;

    std::vector<std::vector<Scalar>> to_dense(const Field& field) const;

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::vector<Vector> cols_;
};

/// First position where a and b differ, for failure witnesses.
struct Mismatch {
    std::size_t row;
    std::size_t col;
};
std::vector<Mismatch> mismatches(const SparseMatrix& a, const SparseMatrix& b, std::size_t limit = 1);

}  // namespace ttcalc

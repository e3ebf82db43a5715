#include "ttcalc/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace ttcalc {

Vector Vector::unit(std::size_t dim, std::size_t i, const Field& field) {
    Vector v(dim);
    v.entries_.push_back({static_cast<std::uint32_t>(i), field.one()});
    return v;
}

Vector Vector::from_dense(std::span<const Scalar> values) {
    Vector v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!values[i].is_zero()) v.entries_.push_back({static_cast<std::uint32_t>(i), values[i]});
    return v;
}

const Scalar* Vector::find(std::size_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.index < k; });
    if (it == entries_.end() || it->index != i) return nullptr;
    return &it->value;
}

Scalar Vector::at(std::size_t i, const Field& field) const {
    const Scalar* s = find(i);
    return s ? *s : field.zero();
}

void Vector::push_back(std::uint32_t index, Scalar value) {
    if (index >= dim_) throw std::out_of_range("vector index out of range");
    if (!entries_.empty() && entries_.back().index >= index)
        throw std::invalid_argument("vector entries must be pushed in increasing order");
    if (!value.is_zero()) entries_.push_back({index, std::move(value)});
}

Vector& Vector::axpy(const Scalar& c, const Vector& x) {
    if (x.dim_ != dim_) throw std::invalid_argument("vector dimension mismatch");
    if (c.is_zero() || x.entries_.empty()) return *this;
    std::vector<Entry> out;
    out.reserve(entries_.size() + x.entries_.size());
    auto a = entries_.begin();
    auto b = x.entries_.begin();
    while (a != entries_.end() || b != x.entries_.end()) {
        if (b == x.entries_.end() || (a != entries_.end() && a->index < b->index)) {
            out.push_back(std::move(*a++));
        } else if (a == entries_.end() || b->index < a->index) {
            out.push_back({b->index, c * b->value});
            ++b;
        } else {
            a->value += c * b->value;
            if (!a->value.is_zero()) out.push_back(std::move(*a));
            ++a;
            ++b;
        }
    }
    entries_ = std::move(out);
    return *this;
}

Vector& Vector::operator+=(const Vector& x) {
    if (x.entries_.empty()) return *this;
    return axpy(x.entries_.front().value.field().one(), x);
}

Vector& Vector::operator-=(const Vector& x) {
    if (x.entries_.empty()) return *this;
    return axpy(-x.entries_.front().value.field().one(), x);
}

Vector& Vector::operator*=(const Scalar& c) {
    if (c.is_zero()) {
        entries_.clear();
        return *this;
    }
    for (auto& e : entries_) e.value *= c;
    return *this;
}

Vector Vector::operator-() const {
    Vector v = *this;
    for (auto& e : v.entries_) e.value = -e.value;
    return v;
}

Vector Vector::concat(const Vector& tail) const {
    Vector v(dim_ + tail.dim_);
    v.entries_ = entries_;
    for (const auto& e : tail.entries_)
        v.entries_.push_back({static_cast<std::uint32_t>(e.index + dim_), e.value});
    return v;
}

Vector Vector::slice(std::size_t offset, std::size_t len) const {
    Vector v(len);
    for (const auto& e : entries_)
        if (e.index >= offset && e.index < offset + len)
            v.entries_.push_back({static_cast<std::uint32_t>(e.index - offset), e.value});
    return v;
}

Vector Vector::embedded(std::size_t dim, std::size_t offset) const {
    if (offset + dim_ > dim) throw std::out_of_range("embedding out of range");
    Vector v(dim);
    v.entries_.reserve(entries_.size());
    for (const auto& e : entries_)
        v.entries_.push_back({static_cast<std::uint32_t>(e.index + offset), e.value});
    return v;
}

std::vector<Scalar> Vector::to_dense(const Field& field) const {
    std::vector<Scalar> out(dim_, field.zero());
    for (const auto& e : entries_) out[e.index] = e.value;
    return out;
}

Accumulator::Accumulator(std::size_t dim) : dim_(dim), values_(dim), used_(dim, 0) {}

void Accumulator::add(std::uint32_t index, const Scalar& value) {
    if (used_[index]) {
        values_[index] += value;
    } else {
        used_[index] = 1;
        values_[index] = value;
        touched_.push_back(index);
    }
}

void Accumulator::add(const Scalar& c, const Vector& x) {
    for (const auto& e : x.entries()) add(e.index, c * e.value);
}

Vector Accumulator::take() {
    std::sort(touched_.begin(), touched_.end());
    Vector v(dim_);
    for (auto i : touched_) {
        used_[i] = 0;
        if (!values_[i].is_zero()) v.push_back(i, std::move(values_[i]));
    }
    touched_.clear();
    return v;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols, Vector(rows)) {}

SparseMatrix SparseMatrix::identity(std::size_t n, const Field& field) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.cols_[i] = Vector::unit(n, i, field);
    return m;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    SparseMatrix m(rows, cols);
    for (std::size_t k = 0; k < entries.size();) {
        auto& t = entries[k];
        if (t.row >= rows || t.col >= cols) throw std::out_of_range("triplet index out of range");
        Scalar sum = t.value;
        std::size_t l = k + 1;
        while (l < entries.size() && entries[l].row == t.row && entries[l].col == t.col) sum += entries[l++].value;
        m.cols_[t.col].push_back(t.row, std::move(sum));
        k = l;
    }
    return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, std::vector<Vector> columns) {
    SparseMatrix m;
    m.rows_ = rows;
    for (const auto& c : columns)
        if (c.dim() != rows) throw std::invalid_argument("column dimension mismatch");
    m.cols_ = std::move(columns);
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Scalar>>& rows) {
    std::size_t nr = rows.size();
    std::size_t nc = nr ? rows[0].size() : 0;
    SparseMatrix m(nr, nc);
    for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t i = 0; i < nr; ++i)
            m.cols_[j].push_back(static_cast<std::uint32_t>(i), rows[i].at(j));
    return m;
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.nnz();
    return n;
}

bool SparseMatrix::is_zero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const Vector& c) { return c.is_zero(); });
}

void SparseMatrix::set_column(std::size_t j, Vector v) {
    if (v.dim() != rows_) throw std::invalid_argument("column dimension mismatch");
    cols_.at(j) = std::move(v);
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t j = 0; j < cols_.size(); ++j)
        for (const auto& e : cols_[j].entries()) out.push_back({e.index, static_cast<std::uint32_t>(j), e.value});
    std::stable_sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) { return a.row < b.row; });
    return out;
}

Vector SparseMatrix::apply(const Vector& x) const {
    if (x.dim() != cols_.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    if (x.nnz() == 1) {
        Vector v = cols_[x.entries()[0].index];
        return v *= x.entries()[0].value;
    }
    Accumulator acc(rows_);
    for (const auto& e : x.entries()) acc.add(e.value, cols_[e.index]);
    return acc.take();
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::vector<Entry>> rows(rows_);
    for (std::size_t j = 0; j < cols_.size(); ++j)
        for (const auto& e : cols_[j].entries()) rows[e.index].push_back({static_cast<std::uint32_t>(j), e.value});
    SparseMatrix t(cols_.size(), rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto& e : rows[i]) t.cols_[i].push_back(e.index, std::move(e.value));
    return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
    if (cols_.size() != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    SparseMatrix out(rows_, o.cols());
    Accumulator acc(rows_);
    for (std::size_t j = 0; j < o.cols(); ++j) {
        for (const auto& e : o.cols_[j].entries()) acc.add(e.value, cols_[e.index]);
        out.cols_[j] = acc.take();
    }
    return out;
}

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& o) {
    if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
    for (std::size_t j = 0; j < cols_.size(); ++j) cols_[j] += o.cols_[j];
    return *this;
}

SparseMatrix& SparseMatrix::operator-=(const SparseMatrix& o) {
    if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("matrix difference dimension mismatch");
    for (std::size_t j = 0; j < cols_.size(); ++j) cols_[j] -= o.cols_[j];
    return *this;
}

SparseMatrix& SparseMatrix::operator*=(const Scalar& c) {
    for (auto& col : cols_) col *= c;
    return *this;
}

SparseMatrix SparseMatrix::operator-() const {
    SparseMatrix m = *this;
    for (auto& col : m.cols_) col = -col;
    return m;
}

void SparseMatrix::add_block(std::size_t row, std::size_t col, const SparseMatrix& block) {
    if (row + block.rows() > rows_ || col + block.cols() > cols())
        throw std::out_of_range("block does not fit");
    for (std::size_t j = 0; j < block.cols(); ++j)
        if (!block.cols_[j].is_zero()) cols_[col + j] += block.cols_[j].embedded(rows_, row);
}

SparseMatrix SparseMatrix::submatrix(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
    SparseMatrix m(nr, nc);
    for (std::size_t j = 0; j < nc; ++j) m.cols_[j] = cols_.at(c0 + j).slice(r0, nr);
    return m;
}

std::vector<std::vector<Scalar>> SparseMatrix::to_dense(const Field& field) const {
    std::vector<std::vector<Scalar>> out(rows_, std::vector<Scalar>(cols(), field.zero()));
    for (std::size_t j = 0; j < cols(); ++j)
        for (const auto& e : cols_[j].entries()) out[e.index][j] = e.value;
    return out;
}

std::vector<Mismatch> mismatches(const SparseMatrix& a, const SparseMatrix& b, std::size_t limit) {
    std::vector<Mismatch> out;
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        out.push_back({a.rows(), a.cols()});
        return out;
    }
    for (std::size_t j = 0; j < a.cols() && out.size() < limit; ++j) {
        if (a.column(j) == b.column(j)) continue;
        Vector diff = a.column(j) - b.column(j);
        for (const auto& e : diff.entries()) {
            out.push_back({e.index, j});
            if (out.size() >= limit) break;
        }
    }
    return out;
}

}  // namespace ttcalc

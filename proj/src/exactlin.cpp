#include "ttcalc/exactlin.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ttcalc/errors.hpp"

namespace ttcalc {

namespace {

Field field_of(const SparseMatrix& m) {
    for (const auto& c : m.columns())
        if (!c.is_zero()) return c.leading_value().field();
    return Field::rationals();
}

}  // namespace

namespace detail {

RrefResult rref_dense(const SparseMatrix& m, const Field& field) {
    auto a = m.to_dense(field);
    const std::size_t nr = m.rows(), nc = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t p = r;
        while (p < nr && a[p][c].is_zero()) ++p;
        if (p == nr) continue;
        std::swap(a[p], a[r]);
        Scalar inv = a[r][c].inverse();
        for (std::size_t k = c; k < nc; ++k) a[r][k] *= inv;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Scalar f = a[i][c];
            for (std::size_t k = c; k < nc; ++k)
                if (!a[r][k].is_zero()) a[i][k] -= f * a[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return {SparseMatrix::from_dense(a), std::move(pivots)};
}

RrefResult rref_sparse(const SparseMatrix& m) {
    const std::size_t nc = m.cols();
    SparseMatrix t = m.transpose();
    std::vector<Vector> rows = t.columns();
    // Sparsest rows first keeps fill-in low; the final form does not depend on it.
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].nnz() < rows[b].nnz(); });

    std::vector<int> row_of_pivot(nc, -1);
    std::vector<Vector> echelon;
    for (std::size_t k : order) {
        Vector r = std::move(rows[k]);
        while (!r.is_zero()) {
            int slot = row_of_pivot[r.leading_index()];
            if (slot < 0) {
                r *= r.leading_value().inverse();
                row_of_pivot[r.leading_index()] = static_cast<int>(echelon.size());
                echelon.push_back(std::move(r));
                break;
            }
            Scalar c = -r.leading_value();
            r.axpy(c, echelon[slot]);
        }
    }

    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < nc; ++c)
        if (row_of_pivot[c] >= 0) pivots.push_back(c);

    // Back substitution, rightmost pivot first: the rows already processed are
    // fully reduced, so one pass over the original pivot entries suffices.
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        Vector& r = echelon[row_of_pivot[*it]];
        std::vector<std::pair<std::size_t, Scalar>> hits;
        for (const auto& e : r.entries())
            if (e.index != *it && row_of_pivot[e.index] >= 0) hits.emplace_back(e.index, e.value);
        for (auto& [col, val] : hits) r.axpy(-val, echelon[row_of_pivot[col]]);
    }

    SparseMatrix reduced(m.rows(), nc);
    std::vector<Vector> out_rows;
    out_rows.reserve(m.rows());
    for (std::size_t c : pivots) out_rows.push_back(std::move(echelon[row_of_pivot[c]]));
    while (out_rows.size() < m.rows()) out_rows.emplace_back(nc);
    return {SparseMatrix::from_columns(nc, std::move(out_rows)).transpose(), std::move(pivots)};
}

}  // namespace detail

RrefResult rref(const SparseMatrix& m) {
    if (m.rows() < kDenseCutoff && m.cols() < kDenseCutoff) return detail::rref_dense(m, field_of(m));
    return detail::rref_sparse(m);
}

std::size_t rank(const SparseMatrix& m) { return rref(m).rank(); }

std::vector<Vector> kernel_basis(const RrefResult& r, std::size_t cols, const Field& field) {
    std::vector<int> is_pivot(cols, 0);
    for (auto c : r.pivot_columns) is_pivot[c] = 1;
    std::vector<int> free_slot(cols, -1);
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) {
            free_slot[c] = static_cast<int>(free_cols.size());
            free_cols.push_back(c);
        }
    // Kernel vector for free column f: e_f - sum_i R[i][f] e_{pivot_i}.
    std::vector<std::vector<Entry>> parts(free_cols.size());
    SparseMatrix rows = r.reduced.transpose();
    for (std::size_t i = 0; i < r.pivot_columns.size(); ++i)
        for (const auto& e : rows.column(i).entries())
            if (free_slot[e.index] >= 0)
                parts[free_slot[e.index]].push_back({static_cast<std::uint32_t>(r.pivot_columns[i]), -e.value});
    std::vector<Vector> basis;
    basis.reserve(free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        auto& p = parts[k];
        p.push_back({static_cast<std::uint32_t>(free_cols[k]), field.one()});
        std::sort(p.begin(), p.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
        Vector v(cols);
        for (auto& e : p) v.push_back(e.index, std::move(e.value));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vector> kernel_basis(const SparseMatrix& m, const Field& field) {
    return kernel_basis(rref(m), m.cols(), field);
}

std::optional<Vector> solve(const SparseMatrix& m, const Vector& rhs) {
    if (rhs.dim() != m.rows()) throw std::invalid_argument("solve: rhs length differs from row count");
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t j = 0; j < m.cols(); ++j) aug.set_column(j, m.column(j));
    aug.set_column(m.cols(), rhs);
    RrefResult r = rref(aug);
    if (!r.pivot_columns.empty() && r.pivot_columns.back() == m.cols()) return std::nullopt;
    Vector x(m.cols());
    const Vector& last = r.reduced.column(m.cols());
    for (const auto& e : last.entries()) x.push_back(static_cast<std::uint32_t>(r.pivot_columns[e.index]), e.value);
    // Pivot columns increase with row index, so x is already sorted.
    return x;
}

std::optional<SparseMatrix> inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    if (n == 0) return SparseMatrix(0, 0);
    const Field field = field_of(m);
    SparseMatrix aug(n, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        aug.set_column(j, m.column(j));
        aug.set_column(n + j, Vector::unit(n, j, field));
    }
    RrefResult r = rref(aug);
    if (r.rank() < n || r.pivot_columns[n - 1] != n - 1) return std::nullopt;
    return r.reduced.submatrix(0, n, n, n);
}

std::vector<Vector> image_basis(const SparseMatrix& m, const RrefResult& r) {
    std::vector<Vector> out;
    out.reserve(r.rank());
    for (auto c : r.pivot_columns) out.push_back(m.column(c));
    return out;
}

EchelonBasis::Reduction EchelonBasis::reduce(Vector v) const {
    Vector tag(tag_dim_);
    while (!v.is_zero()) {
        int slot = slot_of_pivot_[v.leading_index()];
        if (slot < 0) break;
        Scalar c = v.leading_value();
        tag.axpy(c, tags_[slot]);
        v.axpy(-c, vectors_[slot]);
    }
    return {std::move(v), std::move(tag)};
}

bool EchelonBasis::insert(const Vector& v, const Vector& tag) {
    if (v.dim() != ambient_dim_ || tag.dim() != tag_dim_) throw std::invalid_argument("echelon dimension mismatch");
    Reduction red = reduce(v);
    if (red.residual.is_zero()) return false;
    Vector t = tag;
    t -= red.tag;
    Scalar inv = red.residual.leading_value().inverse();
    red.residual *= inv;
    t *= inv;
    slot_of_pivot_[red.residual.leading_index()] = static_cast<int>(vectors_.size());
    vectors_.push_back(std::move(red.residual));
    tags_.push_back(std::move(t));
    return true;
}

std::optional<Vector> HomologySpace::try_project(const Vector& v) const {
    if (v.dim() != ambient_dim_) throw std::invalid_argument("projection: vector dimension mismatch");
    if (!quotient_) return v.is_zero() ? std::optional<Vector>(Vector(0)) : std::nullopt;
    auto red = quotient_->reduce(v);
    if (!red.residual.is_zero()) return std::nullopt;
    if (red.tag.dim() == dim()) return std::move(red.tag);
    return red.tag.slice(0, dim());
}

Vector HomologySpace::project(const Vector& cycle) const {
    auto p = try_project(cycle);
    if (!p) {
        std::ostringstream msg;
        msg << "vector in degree " << degree_ << " is not a cycle (leading index "
            << cycle.leading_index() << ")";
        throw InvariantError(msg.str());
    }
    return *p;
}

bool HomologySpace::is_boundary(const Vector& v) const {
    auto p = try_project(v);
    return p && p->is_zero();
}

Vector HomologySpace::lift(const Vector& coords) const {
    Vector out(ambient_dim_);
    for (const auto& e : coords.entries()) out.axpy(e.value, representatives_.at(e.index));
    return out;
}

SparseMatrix HomologySpace::induced(const SparseMatrix& f, const HomologySpace& target) const {
    if (f.cols() != ambient_dim_ || f.rows() != target.ambient_dim())
        throw std::invalid_argument("induced map: dimension mismatch");
    SparseMatrix out(target.dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) out.set_column(k, target.project(f.apply(representatives_[k])));
    return out;
}

HomologySpace build_subquotient(const std::vector<Vector>& cycles, const std::vector<Vector>& boundaries,
                                std::size_t ambient_dim, const Field& field, int degree, bool cycles_independent) {
    if (!cycles_independent) {
        EchelonBasis cycle_span(ambient_dim, 0);
        for (const auto& z : cycles) cycle_span.insert(z, Vector(0));
        for (std::size_t k = 0; k < boundaries.size(); ++k)
            if (!cycle_span.contains(boundaries[k]))
                throw InvariantError("subquotient: boundary " + std::to_string(k) + " in degree " +
                                     std::to_string(degree) + " is not in the cycle span");
    }
    // Tags live in a space with one slot per candidate cycle; only the first
    // reps.size() slots are ever used.
    const std::size_t slots = cycles.size();
    auto q = std::make_shared<EchelonBasis>(ambient_dim, slots);
    for (const auto& b : boundaries) q->insert(b, Vector(slots));
    const std::size_t boundary_rank = q->size();
    std::vector<Vector> reps;
    for (const auto& z : cycles)
        if (q->insert(z, Vector::unit(slots, reps.size(), field))) reps.push_back(z);
    if (cycles_independent && boundary_rank + reps.size() != cycles.size())
        throw InvariantError("subquotient: boundaries in degree " + std::to_string(degree) +
                             " are not contained in the cycle space");

    HomologySpace h;
    h.degree_ = degree;
    h.ambient_dim_ = ambient_dim;
    h.field_ = field;
    h.quotient_ = std::move(q);
    h.representatives_ = std::move(reps);
    return h;
}

HomologySpace subquotient(const std::vector<Vector>& cycles, const std::vector<Vector>& boundaries,
                          std::size_t ambient_dim, const Field& field, int degree) {
    return build_subquotient(cycles, boundaries, ambient_dim, field, degree, false);
}

HomologySpace homology_at(const SparseMatrix& incoming, const SparseMatrix& outgoing, const Field& field,
                          int degree) {
    const std::size_t dim = outgoing.cols();
    if (incoming.rows() != dim) throw std::invalid_argument("homology_at: incompatible maps");
    std::vector<Vector> cycles;
    if (outgoing.rows() == 0) {
        for (std::size_t i = 0; i < dim; ++i) cycles.push_back(Vector::unit(dim, i, field));
    } else {
        cycles = kernel_basis(outgoing, field);
    }
    std::vector<Vector> boundaries;
    if (incoming.cols() > 0) boundaries = image_basis(incoming, rref(incoming));
    return build_subquotient(cycles, boundaries, dim, field, degree, true);
}

}  // namespace ttcalc

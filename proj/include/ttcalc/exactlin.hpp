#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "ttcalc/sparse.hpp"

namespace ttcalc {

struct RrefResult {
    SparseMatrix reduced;
    std::vector<std::size_t> pivot_columns;
    std::size_t rank() const { return pivot_columns.size(); }
};

/// Matrices with both dimensions below this bound are reduced densely.
inline constexpr std::size_t kDenseCutoff = 64;

/**
 * Reduced row-echelon form. The result is unique, so the dense and sparse
 * elimination paths agree exactly; zero rows are placed last.
 */
RrefResult rref(const SparseMatrix& m);

namespace detail {
RrefResult rref_dense(const SparseMatrix& m, const Field& field);
RrefResult rref_sparse(const SparseMatrix& m);
}  // namespace detail

std::size_t rank(const SparseMatrix& m);

/// Null-space basis read off the rref: one vector per free column, in
/// increasing column order, with a 1 in its own free coordinate.
std::vector<Vector> kernel_basis(const SparseMatrix& m, const Field& field);
std::vector<Vector> kernel_basis(const RrefResult& r, std::size_t cols, const Field& field);

/// Some x with m x = rhs (free variables zero), or nullopt when inconsistent.
std::optional<Vector> solve(const SparseMatrix& m, const Vector& rhs);

/// Two-sided inverse of a square matrix, or nullopt when singular.
std::optional<SparseMatrix> inverse(const SparseMatrix& m);

/// The columns of m at the rref pivot positions: a basis of the column space.
std::vector<Vector> image_basis(const SparseMatrix& m, const RrefResult& r);

/**
 * Echelon basis built one vector at a time, where every stored vector carries
 * a tag: its coordinates in some auxiliary space. Reducing a vector against
 * the basis accumulates the tags of the vectors subtracted, which is how
 * projections onto quotient coordinates are evaluated.
 *
 * Stored vectors have pairwise distinct leading (smallest) indices and leading
 * coefficient 1.
 */
class EchelonBasis {
public:
    EchelonBasis(std::size_t ambient_dim, std::size_t tag_dim)
        : ambient_dim_(ambient_dim), tag_dim_(tag_dim), slot_of_pivot_(ambient_dim, -1) {}

    struct Reduction {
        Vector residual;
        Vector tag;  // sum of c_k * tag_k over the subtracted multiples c_k * v_k
    };
    Reduction reduce(Vector v) const;

    /// Inserts v; `tag` is the tag of v itself. Returns false (and stores
    /// nothing) if v already lies in the span.
    bool insert(const Vector& v, const Vector& tag);

    bool contains(const Vector& v) const { return reduce(v).residual.is_zero(); }
    std::size_t size() const { return vectors_.size(); }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t tag_dim() const { return tag_dim_; }

private:
    std::size_t ambient_dim_;
    std::size_t tag_dim_;
    std::vector<int> slot_of_pivot_;
    std::vector<Vector> vectors_;
    std::vector<Vector> tags_;
};

/**
 * H = cycles / boundaries at one degree: class representatives plus the
 * projection from cycles to class coordinates.
 */
class HomologySpace {
public:
    HomologySpace() = default;

    int degree() const { return degree_; }
    std::size_t dim() const { return representatives_.size(); }
    std::size_t ambient_dim() const { return ambient_dim_; }
    const std::vector<Vector>& representatives() const { return representatives_; }
    const Field& field() const { return field_; }

    /// Class coordinates of a cycle. Throws InvariantError if v is not in the
    /// cycle space.
    Vector project(const Vector& cycle) const;
    std::optional<Vector> try_project(const Vector& v) const;
    bool is_cycle(const Vector& v) const { return try_project(v).has_value(); }
    bool is_boundary(const Vector& v) const;

    /// A cycle representing the class with coordinates c.
    Vector lift(const Vector& coords) const;

    /// Matrix of the map induced by f on classes; f sends this space's chains
    /// into target's chains. Throws InvariantError if an image is not a cycle.
    SparseMatrix induced(const SparseMatrix& f, const HomologySpace& target) const;

private:
    friend HomologySpace build_subquotient(const std::vector<Vector>&, const std::vector<Vector>&,
                                           std::size_t, const Field&, int, bool);
    int degree_ = 0;
    std::size_t ambient_dim_ = 0;
    Field field_ = Field::rationals();
    std::vector<Vector> representatives_;
    // Boundaries (tag 0) then representatives; tags may be longer than dim().
    std::shared_ptr<const EchelonBasis> quotient_;
};

/**
 * Builds the subquotient span(cycles) / span(boundaries). Representatives are
 * the cycles, in the given order, that are independent of the boundaries and
 * of the earlier representatives. Throws InvariantError if a boundary is not
 * in span(cycles).
 */
HomologySpace subquotient(const std::vector<Vector>& cycles, const std::vector<Vector>& boundaries,
                          std::size_t ambient_dim, const Field& field, int degree = 0);

/// Homology of C_{n+1} --in--> C_n --out--> C_{n-1} at C_n. Either map may be
/// absent (zero-dimensional neighbour) by passing an empty-column or empty-row matrix.
HomologySpace homology_at(const SparseMatrix& incoming, const SparseMatrix& outgoing, const Field& field,
                          int degree = 0);

}  // namespace ttcalc

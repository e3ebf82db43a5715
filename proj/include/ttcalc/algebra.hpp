#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ttcalc/report.hpp"
#include "ttcalc/sparse.hpp"

namespace ttcalc {

struct StructureConstant {
    std::size_t i, j, l;
    Scalar coeff;  // e_i * e_j contains coeff * e_l
};

/**
 * A finite-dimensional unital associative algebra over a field, given by
 * structure constants in a fixed basis. Elements are coefficient vectors.
 *
 * The constructor only checks shapes; use validate() for the algebra axioms.
 */
class Algebra {
public:
    Algebra() = default;
    Algebra(std::string name, Field field, std::vector<std::string> basis, Vector unit,
            const std::vector<StructureConstant>& mult, std::vector<Vector> idempotents = {});

    const std::string& name() const { return name_; }
    const Field& field() const { return field_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    const Vector& unit() const { return unit_; }
    const std::vector<Vector>& idempotents() const { return idempotents_; }

    /// e_i * e_j
    const Vector& product(std::size_t i, std::size_t j) const { return products_[i * dim() + j]; }
    Vector multiply(const Vector& u, const Vector& v) const;
    /// Left and right multiplication by u as d x d matrices.
    SparseMatrix left_multiplication(const Vector& u) const;

    /// All nonzero structure constants sorted by (i, j, l).
    std::vector<StructureConstant> structure_constants() const;

    struct Factorization {
        std::size_t i, j;
        Scalar coeff;
    };
    /// Pairs (i, j) with a nonzero e_l-coefficient in e_i e_j.
    const std::vector<Factorization>& factorizations(std::size_t l) const { return factorizations_[l]; }

    Vector basis_vector(std::size_t i) const { return Vector::unit(dim(), i, field_); }
    Vector zero() const { return Vector(dim()); }

    void set_name(std::string name) { name_ = std::move(name); }

private:
    std::string name_;
    Field field_ = Field::rationals();
    std::vector<std::string> basis_;
    Vector unit_;
    std::vector<Vector> products_;
    std::vector<Vector> idempotents_;
    std::vector<std::vector<Factorization>> factorizations_;
};

/// Every violated axiom (associativity triple, unit law, idempotent law); empty when valid.
Report validate(const Algebra& a);

struct Arrow {
    std::size_t source;
    std::size_t target;
    std::string label;
};

/// Quiver with monomial relations; a relation is an arrow sequence in path
/// order (first arrow traversed first).
struct Quiver {
    std::size_t vertices = 0;
    std::vector<Arrow> arrows;
    std::vector<std::vector<std::size_t>> relations;
};

Algebra ground_field(const Field& f);
Algebra dual_numbers(const Field& f);
/// k[x]/(x^n), basis 1, x, ..., x^{n-1}.
Algebra truncated_poly(const Field& f, std::size_t n);
Algebra matrix_algebra(const Field& f, std::size_t n);
/// Upper triangular n x n matrices, basis e_ij (i <= j) in lexicographic order.
Algebra upper_triangular(const Field& f, std::size_t n);
/// Direct product; factor idempotents (or units) become the idempotent family.
Algebra product(const std::vector<Algebra>& factors);
Algebra opposite(const Algebra& a);
/**
 * Path algebra kQ/I for monomial relations I. Multiplication is composition:
 * p * q is "q then p", nonzero when target(q) = source(p). The basis lists the
 * vertex idempotents e1..en followed by the paths avoiding every relation, by
 * length and then lexicographically; a path a1 a2 ... ak (traversal order) is
 * labelled by its arrows in composition order, e.g. "ba" for a then b.
 * Throws DomainError when the quotient is infinite-dimensional.
 */
Algebra path_algebra(const Field& f, const Quiver& q, std::string name = "path_algebra");

/// The two orientations of A_3 used throughout: 1 -a-> 2 -b-> 3 and 1 -u-> 2 <-v- 3.
Algebra a3_linear(const Field& f);
Algebra a3_sink(const Field& f);

/**
 * Builds a named family member: "ground_field", "dual_numbers",
 * "truncated_poly(n)", "matrix_algebra(n)", "upper_triangular(n)",
 * "k_times_k", "a3_linear", "a3_sink", "product(f1,f2,...)",
 * "opposite(f)". Throws ParseError for unknown names.
 */
Algebra build(std::string_view family, const Field& f);

/// The same algebra in a basis whose first vector is the unit.
struct UnitFirstBasis {
    Algebra algebra;
    SparseMatrix to_new;  // old coordinates -> new coordinates
    SparseMatrix to_old;  // new coordinates -> old coordinates
};
UnitFirstBasis rebase_unit_first(const Algebra& a);

/// Same field, basis and structure constants.
bool same_structure(const Algebra& a, const Algebra& b);

}  // namespace ttcalc

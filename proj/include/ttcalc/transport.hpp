#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttcalc/hochschild.hpp"
#include "ttcalc/io.hpp"
#include "ttcalc/report.hpp"

namespace ttcalc {

/// A rows x cols matrix whose entries are elements of an algebra of dimension dim.
class BMatrix {
public:
    BMatrix() = default;
    BMatrix(std::size_t rows, std::size_t cols, std::size_t dim);

    static BMatrix identity(const Algebra& b, std::size_t n);
    static BMatrix diagonal(std::size_t dim, const std::vector<Vector>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t dim() const { return dim_; }
    const Vector& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Vector& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    bool is_zero() const;

    BMatrix& operator+=(const BMatrix& o);
    BMatrix& operator-=(const BMatrix& o);
    BMatrix operator-() const;
    friend BMatrix operator+(BMatrix a, const BMatrix& b) { return a += b; }
    friend BMatrix operator-(BMatrix a, const BMatrix& b) { return a -= b; }
    friend bool operator==(const BMatrix& a, const BMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, dim_ = 0;
    std::vector<Vector> entries_;
};

/// x * y with entries multiplied in b.
BMatrix multiply(const Algebra& b, const BMatrix& x, const BMatrix& y);
/// Left multiplication by m on column vectors B^cols -> B^rows, coordinates i * dim B + k.
SparseMatrix linear_map(const Algebra& b, const BMatrix& m);

/// Degree p of a dg bimodule: X^p = E B^rank with d: X^p -> X^{p-1}.
struct BimoduleTerm {
    int degree = 0;
    std::size_t rank = 0;
    BMatrix idempotent;
    /// rank(p-1) x rank(p); 0 x rank at the lowest degree.
    BMatrix differential;
    /// One rank x rank matrix per basis element of the source algebra.
    std::vector<BMatrix> left_action;
};

/**
 * A dg A-B-bimodule, degreewise f.g. projective over B, in consecutive
 * degrees terms.front().degree .. terms.back().degree.
 */
struct DgBimodule {
    Algebra source, target;
    std::vector<BimoduleTerm> terms;

    int min_degree() const { return terms.empty() ? 0 : terms.front().degree; }
    int max_degree() const { return terms.empty() ? -1 : terms.back().degree; }
    /// nullptr outside the degree range.
    const BimoduleTerm* term(int p) const;
    std::size_t rank(int p) const;
    /// E L(e_i) E for term t: the matrix of xi_j(e_i x_l).
    BMatrix action(const BimoduleTerm& t, std::size_t i) const;
};

/**
 * Exact checks of the bimodule axioms, ids bimodule.<axiom>.p<degree>:
 * idempotent, presentation (E d E = d), d2, unit, action, stable (L E = E L E),
 * chain (left action commutes with d) and dual_basis.
 */
Report validate_bimodule(const DgBimodule& x);

/// A as an A-A-bimodule placed in one degree with zero differential.
DgBimodule regular_bimodule(const Algebra& a, int degree = 0);
/// fB with X = f(1)B and a acting by f(a); f is dim B x dim A. Throws DomainError unless f is multiplicative.
DgBimodule bimodule_from_morphism(const Algebra& a, const Algebra& b, const SparseMatrix& f);
/// X (x)_B Y with d = d_X (x) 1 + (-1)^p 1 (x) d_Y. Throws std::invalid_argument on an algebra mismatch.
DgBimodule compose(const DgBimodule& x, const DgBimodule& y);
/// X + Y degreewise.
DgBimodule direct_sum(const DgBimodule& x, const DgBimodule& y);

/// The Hom complex End_B(X) in homological grading, degree n = maps X^p -> X^{p+n}.
struct EndComplex {
    int min_degree = 0, max_degree = 0;
    /// Ambient coordinates per degree: blocks over p of rank(p+n) x rank(p) matrices over B.
    std::vector<std::size_t> dims;
    /// D_n: End_n -> End_{n-1} in ambient coordinates.
    std::vector<SparseMatrix> differential;
    /// Projection onto the corner spaces E_{p+n} Hom E_p.
    std::vector<SparseMatrix> corner;
    std::vector<HomologySpace> homology;
    /// alpha: A -> End_0, one column per basis element of A.
    SparseMatrix alpha;

    std::size_t index(int n) const { return static_cast<std::size_t>(n - min_degree); }
};

EndComplex end_complex(const DgBimodule& x);
/// equiv.alpha.mult, equiv.H0.iso and equiv.H.n (vanishing outside degree 0).
Report validate_derived_equivalence(const DgBimodule& x);

/// Sign of the degree-p summand of the trace on C_n: (-1)^{s(p, n)}.
enum class TraceSign { none, degree, degree_times_n, degree_plus_degree_times_n };
inline constexpr TraceSign kTraceSign = TraceSign::degree;
int trace_sign(TraceSign s, int p, int n);
const char* to_string(TraceSign s);

/**
 * Dual-basis trace C_n(A) -> C_n(B) on unnormalized chains:
 * a_0 .. a_n |-> sum_p sign sum_j xi_{j0}(a_0 x_{j1}) (x) xi_{j1}(a_1 x_{j2}) (x) .. (x) xi_{jn}(a_n x_{j0}).
 */
SparseMatrix trace_map(const DgBimodule& x, int n, TraceSign s = kTraceSign, Limits limits = {});

/// a_0 .. a_n |-> f(a_0) .. f(a_n) on unnormalized chains.
SparseMatrix tensor_power_map(const Algebra& a, const Algebra& b, const SparseMatrix& f, int n, Limits limits = {});

/**
 * Matrices HH_n(A) -> HH_n(B), n = 0..D, in the class bases of the
 * normalized complexes (the bases of CalculusTable), induced by chain maps
 * between unnormalized complexes.
 */
std::vector<SparseMatrix> induced_on_hh(const Algebra& a, const Algebra& b,
                                        const std::function<SparseMatrix(int)>& chain_map, int D,
                                        Limits limits = {});

/**
 * Derived invariance of HH, B and the SBI ladder under the trace of x:
 * trace.{b,t,bprime}.n (chain map), ladder.hh_iso.n, ladder.B.n,
 * ladder.I.n, ladder.S.n, ladder.Bprime.n, ladder.hc_iso.n; a chain.B note
 * for chain-level commutation with the cone model's second differential.
 */
Report transport_report(const DgBimodule& x, int D, TraceSign s = kTraceSign, Limits limits = {});

/// Solution of HH(Tr)(i_a z) = i_{T(a)} HH(Tr)(z) for T: HH^m(A) -> HH^m(B).
struct CohomologyTransport {
    bool unique = false;
    /// T[m], in CalculusTable class bases; filled when unique.
    std::vector<SparseMatrix> T;
    /// Dimension of the solution space per basis class, per degree.
    std::vector<std::size_t> freedom;
    Report report;
};

/**
 * cohomology.solve.m (consistency), cohomology.unit, cohomology.cup.m.n and
 * cohomology.bracket.m.n when unique; a cohomology.inconclusive note
 * otherwise.
 */
CohomologyTransport transport_cohomology_solve(const DgBimodule& x, int D, TraceSign s = kTraceSign,
                                               Limits limits = {});

/**
 * Bimodule document: source, target (family names or inline algebra
 * documents), degrees [min, max] and terms, each with degree, rank,
 * idempotent, differential and left_action. Matrix entries are coefficient
 * arrays or linear combinations of basis labels ("2*ba - e1"). Throws ParseError.
 */
DgBimodule bimodule_from_json(const Json& j, std::optional<Field> field_override = std::nullopt,
                              const std::string& base_dir = ".");
Json bimodule_to_json(const DgBimodule& x);
DgBimodule load_bimodule(const std::string& path, std::optional<Field> field_override = std::nullopt);

/// Parses "2*ba - e1", "0", "1/2*x^2" against the basis labels of b. Throws ParseError.
Vector parse_element(const Algebra& b, const std::string& text);

}  // namespace ttcalc

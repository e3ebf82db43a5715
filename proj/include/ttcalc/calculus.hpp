#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ttcalc/hochschild.hpp"
#include "ttcalc/report.hpp"

namespace ttcalc {

// Chain-level operations. Cochains of degree m are vectors in C^m of the
// given complex, chains of degree n vectors in C_n.

/// (f u g)(a_1..a_{m+n}) = f(a_1..a_m) g(a_{m+1}..a_{m+n})
Vector cup(const HochschildComplex& c, const Vector& f, int m, const Vector& g, int n);
/// f o g = sum_i (-1)^{(i-1)(n-1)} f(.., g(a_i..a_{i+n-1}), ..)
Vector compose(const HochschildComplex& c, const Vector& f, int m, const Vector& g, int n);
/// [f, g] = f o g - (-1)^{(m-1)(n-1)} g o f
Vector bracket(const HochschildComplex& c, const Vector& f, int m, const Vector& g, int n);
/// (a_0 .. a_n) cap f = a_0 f(a_1..a_m) (x) a_{m+1} .. a_n; throws std::invalid_argument if m > n.
Vector cap(const HochschildComplex& c, const Vector& z, int n, const Vector& f, int m);
/// i_f(z) = (-1)^{mn} z cap f
Vector iota(const HochschildComplex& c, const Vector& f, int m, const Vector& z, int n);
/// z |-> z cap f as a matrix C_n -> C_{n-m}.
SparseMatrix cap_matrix(const HochschildComplex& c, const Vector& f, int m, int n);
/// Connes' B on normalized chains of a (built in its unit-first basis).
SparseMatrix connes_B_chain(const HochschildComplex& normalized, int n);

/// Test-harness mutations of Connes' B; never used outside verification tests.
struct BMutation {
    enum class Kind { none, negate_degree, shifted_sign };
    Kind kind = Kind::none;
    int degree = 1;  // negate_degree: the degree whose B is negated
};

/// Which product identity (3) holds as operators: i_b i_a = i_{b u a}.
enum class CapOrientation { beta_cup_alpha, alpha_cup_beta };
inline constexpr CapOrientation kCapOrientation = CapOrientation::beta_cup_alpha;

/**
 * Homology-level calculus of an algebra in the class bases of its normalized
 * complex: HH_0..HH_D and HH^0..HH^D with cup, bracket, iota and B stored as
 * explicit matrices. Operator entries whose degrees leave 0..D are absent.
 */
class CalculusTable {
public:
    /// Throws InvariantError if some operator fails to descend to homology.
    CalculusTable(const Algebra& a, int D, BMutation mutation = {}, Limits limits = {});

    int max_degree() const { return D_; }
    const HochschildComplex& complex() const { return *complex_; }
    std::shared_ptr<const HochschildComplex> complex_ptr() const { return complex_; }
    const HomologySpace& hh(int n) const { return homology_.at(n); }
    const HomologySpace& hc(int m) const { return cohomology_.at(m); }
    std::size_t hh_dim(int n) const { return n < 0 || n > D_ ? 0 : homology_[n].dim(); }
    std::size_t coh_dim(int m) const { return m < 0 || m > D_ ? 0 : cohomology_[m].dim(); }

    /// Chain-level B used for this table (mutation applied).
    SparseMatrix chain_B(int n) const;
    /// HH_n -> HH_{n+1}, 0 <= n < D.
    const SparseMatrix& B(int n) const { return B_.at(n); }
    /// HH^m x HH^n -> HH^{m+n}: column i * dim HH^n + j holds alpha_i u beta_j.
    const SparseMatrix& cup_table(int m, int n) const { return cup_.at({m, n}); }
    const SparseMatrix& bracket_table(int m, int n) const { return bracket_.at({m, n}); }
    bool has_cup(int m, int n) const { return cup_.count({m, n}) > 0; }
    bool has_bracket(int m, int n) const { return bracket_.count({m, n}) > 0; }
    /// i of the k-th basis class of HH^m on HH_n -> HH_{n-m}.
    const SparseMatrix& iota_class(int m, std::size_t k, int n) const { return iota_.at({m, n}).at(k); }

    Vector cup(const Vector& alpha, int m, const Vector& beta, int n) const;
    Vector bracket(const Vector& alpha, int m, const Vector& beta, int n) const;
    /// i_alpha on HH_n for class coordinates alpha in HH^m.
    SparseMatrix iota(const Vector& alpha, int m, int n) const;
    /// The unit class 1 in HH^0.
    Vector unit_class() const;

private:
    int D_;
    BMutation mutation_;
    std::shared_ptr<const HochschildComplex> complex_;
    std::vector<HomologySpace> homology_, cohomology_;
    std::vector<SparseMatrix> B_;
    std::map<std::pair<int, int>, SparseMatrix> cup_, bracket_;
    std::map<std::pair<int, int>, std::vector<SparseMatrix>> iota_;
};

/**
 * Checks the calculus axioms: chain-level b^2 = 0, delta^2 = 0, B^2 = 0,
 * bB + Bb = 0 and the derivation rule for delta; then on homology cup
 * associativity and graded commutativity (cup.*), graded Jacobi and Leibniz
 * (bracket.*), iota composition (cap.assoc.*), B^2 = 0 (B2.*) and
 * [B i_a - (-1)^|a| i_a B, i_b] = i_[a,b] (tt.eq1.*). Never throws on
 * mathematical failure; every failing entry carries a witness.
 */
Report verify_calculus(const Algebra& a, int D, BMutation mutation = {}, Limits limits = {});

/// Report checks built from a finished table (no chain-level part).
Report verify_tables(const CalculusTable& t);

/// Short text for a class vector: "2*[1] - [3]" style, 0-based class indices.
std::string describe_class(const Vector& v);

}  // namespace ttcalc

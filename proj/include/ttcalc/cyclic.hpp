#pragma once

#include <string>
#include <vector>

#include "ttcalc/hochschild.hpp"
#include "ttcalc/report.hpp"

namespace ttcalc {

/**
 * A mixed complex M_0..M_top: d1 of degree -1 and d2 of degree +1 with
 * d1^2 = 0, d2^2 = 0 and d1 d2 + d2 d1 = 0.
 */
struct MixedComplex {
    std::string model;
    Field field = Field::rationals();
    std::vector<std::size_t> dims;
    /// d1[n]: M_n -> M_{n-1}; d1[0] is the 0 x dim M_0 map.
    std::vector<SparseMatrix> d1;
    /// d2[n]: M_n -> M_{n+1} for n < top.
    std::vector<SparseMatrix> d2;

    int top() const { return static_cast<int>(dims.size()) - 1; }
};

/// Test-harness mutation of the cone model: N is negated in one degree.
struct NMutation {
    bool enabled = false;
    int degree = 1;
};

/// Cone over 1 - t: M_n = C_n + C'_{n-1}, d1 = [[b, 1-t], [0, -b']], d2 = [[0, 0], [N, 0]]; degrees 0..D+1.
MixedComplex cone_mixed_complex(const Algebra& a, int D, NMutation mutation = {}, Limits limits = {});
/// Normalized chains with d1 = b and d2 = Connes' B, in the unit-first basis; degrees 0..D+1.
MixedComplex normalized_mixed_complex(const Algebra& a, int D, Limits limits = {});

/// One entry per degree for d1^2 = 0, d2^2 = 0 and d1 d2 + d2 d1 = 0: prefix.d1sq.n, prefix.d2sq.n, prefix.anti.n.
Report check_mixed(const MixedComplex& m, const std::string& prefix);

/// Tot_n = sum over p >= 0 of M_{n-2p}, column p at offset total_offset(m, n, p).
std::size_t total_dim(const MixedComplex& m, int n);
std::size_t total_offset(const MixedComplex& m, int n, int p);
/// Tot_n -> Tot_{n-1}: d1 inside each column, d2 from column p to column p-1.
SparseMatrix total_differential(const MixedComplex& m, int n, Limits limits = {});

/// HC_0..HC_D of the bicomplex; needs m.top() >= D + 1. Throws InvariantError if Tot is not a complex.
std::vector<HomologySpace> cyclic_homology(const MixedComplex& m, int D, Limits limits = {});

/**
 * Homology of (M, d1) and of Tot with the maps of the SBI sequence
 * ... -> HC_{n-1} -B'-> HH_n -I-> HC_n -S-> HC_{n-2} -B'-> HH_{n-1} -> ...
 * in the class bases.
 */
struct CyclicTable {
    int D = 0;
    std::vector<HomologySpace> hh, hc;
    /// I[n]: HH_n -> HC_n
    std::vector<SparseMatrix> I;
    /// S[n]: HC_n -> HC_{n-2}; S[0], S[1] map to the zero space.
    std::vector<SparseMatrix> S;
    /// Bprime[n]: HC_n -> HH_{n+1}, n < D.
    std::vector<SparseMatrix> Bprime;
    /// Bprime recomputed with a second lift, for the independence check.
    std::vector<SparseMatrix> Bprime_alt;
};

/// Throws InvariantError if Tot is not a complex or a lift fails.
CyclicTable sbi_maps(const MixedComplex& m, int D, Limits limits = {});

/**
 * Checks both models: mixed complex axioms (cone.*, norm.*), exactness of the
 * SBI sequence at every node through D (sbi.exact.*), independence of the
 * connecting map from the lift, B'_n I_n against the homology-level Connes
 * operator of the calculus tables (sbi.BI.n), HC_0 = HH_0 and equal HC
 * dimensions for the two models (hc.models.n).
 */
Report verify_sbi(const Algebra& a, int D, NMutation mutation = {}, Limits limits = {});

}  // namespace ttcalc

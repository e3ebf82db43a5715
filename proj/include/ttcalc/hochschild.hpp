#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ttcalc/algebra.hpp"
#include "ttcalc/exactlin.hpp"

namespace ttcalc {

struct Limits {
    std::size_t max_chain_dim = 1000000;
};

/**
 * Lexicographic numbering of tensor-basis tuples. In the normalized layout
 * every slot except the leading chain slot ranges over the complement
 * 1..d-1 of the unit; tuples with a 0 there are degenerate (npos).
 */
class TupleCodec {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    TupleCodec(std::size_t d, bool normalized) : d_(d), normalized_(normalized) {}

    std::size_t d() const { return d_; }
    bool normalized() const { return normalized_; }
    std::size_t interior_radix() const { return normalized_ ? d_ - 1 : d_; }

    /// d * r^n; saturates at npos on overflow.
    std::size_t chain_dim(int n) const;
    /// r^n * d: n inputs, one output.
    std::size_t cochain_dim(int n) const;

    std::size_t encode_chain(std::span<const std::uint32_t> tuple) const;
    void decode_chain(std::size_t index, std::span<std::uint32_t> out) const;
    std::size_t encode_cochain(std::span<const std::uint32_t> inputs, std::uint32_t output) const;
    /// Returns the output index; inputs go to `out`.
    std::uint32_t decode_cochain(std::size_t index, std::span<std::uint32_t> inputs) const;
    /// Lexicographic index of an input tuple with every slot interior.
    std::size_t encode_inputs(std::span<const std::uint32_t> inputs) const;

private:
    std::size_t d_;
    bool normalized_;
};

/**
 * Hochschild chains C_n = A^{n+1} and cochains C^n = Hom(A^n, A) of one
 * algebra, with b, b', t, N, delta and (normalized only) Connes' B.
 *
 * The normalized complex lives in the unit-first basis of rebase_unit_first;
 * chain and cochain coordinates then refer to algebra(), not original().
 * Operator matrices are built on first use and cached; the object is safe to
 * share between threads.
 */
class HochschildComplex {
public:
    explicit HochschildComplex(const Algebra& a, bool normalized = false, Limits limits = {});

    const Algebra& algebra() const { return working_; }
    const Algebra& original() const { return original_; }
    /// Basis change original -> algebra(); identity when unnormalized.
    const SparseMatrix& to_working() const { return to_working_; }
    const SparseMatrix& to_original() const { return to_original_; }
    bool normalized() const { return codec_.normalized(); }
    const Field& field() const { return working_.field(); }
    std::size_t d() const { return working_.dim(); }
    const TupleCodec& codec() const { return codec_; }
    const Limits& limits() const { return limits_; }

    /// Throws ResourceLimitError beyond the configured cap.
    std::size_t chain_dim(int n) const;
    std::size_t cochain_dim(int n) const;

    /// b: C_n -> C_{n-1}, n >= 1.
    const SparseMatrix& b(int n) const;
    /// b': C_n -> C_{n-1}, n >= 1, unnormalized only.
    const SparseMatrix& bprime(int n) const;
    /// t, N: C_n -> C_n, unnormalized only.
    const SparseMatrix& t(int n) const;
    const SparseMatrix& N(int n) const;
    /// Connes' B = s N: C_n -> C_{n+1}, normalized only.
    const SparseMatrix& connes_B(int n) const;
    /// delta: C^n -> C^{n+1}, n >= 0.
    const SparseMatrix& delta(int n) const;

    /// b_n, or the 0 x dim(C_0) map for n = 0.
    SparseMatrix b_or_zero(int n) const;

private:
    enum class Op { b, bprime, t, N, B, delta };
    const SparseMatrix& cached(Op op, int n) const;
    SparseMatrix build(Op op, int n) const;
    SparseMatrix build_b(int n, bool cyclic_term) const;
    SparseMatrix build_t(int n) const;
    SparseMatrix build_N(int n) const;
    SparseMatrix build_B(int n) const;
    SparseMatrix build_delta(int n) const;

    Algebra original_;
    Algebra working_;
    SparseMatrix to_working_;
    SparseMatrix to_original_;
    TupleCodec codec_;
    Limits limits_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<SparseMatrix>> cache_;
};

/// HH_0 .. HH_D, built from b_1 .. b_{D+1}.
std::vector<HomologySpace> hochschild_homology(const HochschildComplex& c, int D);
/// HH^0 .. HH^D, built from delta_0 .. delta_D.
std::vector<HomologySpace> hochschild_cohomology(const HochschildComplex& c, int D);

/// Chain-level comparison C_n(A) -> C_n^norm(A): rebase each slot, then drop
/// tensors with the unit in an interior slot. A quasi-isomorphism commuting with b.
SparseMatrix normalization_map(const HochschildComplex& unnormalized, const HochschildComplex& normalized, int n);

/// Unnormalized conveniences in the original basis.
SparseMatrix boundary_b(const Algebra& a, int n);
SparseMatrix boundary_bprime(const Algebra& a, int n);
SparseMatrix cyclic_t(const Algebra& a, int n);
SparseMatrix cyclic_N(const Algebra& a, int n);
SparseMatrix cochain_delta(const Algebra& a, int n);

}  // namespace ttcalc

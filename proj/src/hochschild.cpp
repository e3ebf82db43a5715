#include "ttcalc/hochschild.hpp"

#include <stdexcept>

#include "ttcalc/errors.hpp"
#include "ttcalc/parallel.hpp"

namespace ttcalc {

namespace {

std::size_t saturating_pow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int k = 0; k < exp; ++k) {
        if (base != 0 && r > TupleCodec::npos / base) return TupleCodec::npos;
        r *= base;
    }
    return r;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > TupleCodec::npos / a) return TupleCodec::npos;
    return a * b;
}

Scalar sign(const Field& f, long k) { return (k % 2 == 0) ? f.one() : -f.one(); }

/// Fills each column of a rows x cols matrix with body(col, tuple scratch, accumulator).
template <class Body>
SparseMatrix build_by_columns(std::size_t rows, std::size_t cols, Body body) {
    std::vector<Vector> columns(cols);
    parallel_for(cols, [&](std::size_t begin, std::size_t end, std::size_t) {
        Accumulator acc(rows);
        for (std::size_t j = begin; j < end; ++j) {
            body(j, acc);
            columns[j] = acc.take();
        }
    });
    return SparseMatrix::from_columns(rows, std::move(columns));
}

}  // namespace

std::size_t TupleCodec::chain_dim(int n) const {
    if (n < 0) return 0;
    return saturating_mul(d_, saturating_pow(interior_radix(), n));
}

std::size_t TupleCodec::cochain_dim(int n) const {
    if (n < 0) return 0;
    return saturating_mul(saturating_pow(interior_radix(), n), d_);
}

std::size_t TupleCodec::encode_chain(std::span<const std::uint32_t> tuple) const {
    std::size_t idx = tuple[0];
    const std::size_t r = interior_radix();
    for (std::size_t k = 1; k < tuple.size(); ++k) {
        std::uint32_t v = tuple[k];
        if (normalized_) {
            if (v == 0) return npos;
            --v;
        }
        idx = idx * r + v;
    }
    return idx;
}

void TupleCodec::decode_chain(std::size_t index, std::span<std::uint32_t> out) const {
    const std::size_t r = interior_radix();
    for (std::size_t k = out.size(); k-- > 1;) {
        out[k] = static_cast<std::uint32_t>(index % r + (normalized_ ? 1 : 0));
        index /= r;
    }
    out[0] = static_cast<std::uint32_t>(index);
}

std::size_t TupleCodec::encode_inputs(std::span<const std::uint32_t> inputs) const {
    std::size_t idx = 0;
    const std::size_t r = interior_radix();
    for (std::uint32_t v : inputs) {
        if (normalized_) {
            if (v == 0) return npos;
            --v;
        }
        idx = idx * r + v;
    }
    return idx;
}

std::size_t TupleCodec::encode_cochain(std::span<const std::uint32_t> inputs, std::uint32_t output) const {
    std::size_t in = encode_inputs(inputs);
    return in == npos ? npos : in * d_ + output;
}

std::uint32_t TupleCodec::decode_cochain(std::size_t index, std::span<std::uint32_t> inputs) const {
    const auto output = static_cast<std::uint32_t>(index % d_);
    index /= d_;
    const std::size_t r = interior_radix();
    for (std::size_t k = inputs.size(); k-- > 0;) {
        inputs[k] = static_cast<std::uint32_t>(index % r + (normalized_ ? 1 : 0));
        index /= r;
    }
    return output;
}

HochschildComplex::HochschildComplex(const Algebra& a, bool normalized, Limits limits)
    : original_(a), codec_(a.dim(), normalized), limits_(limits) {
    if (normalized) {
        auto r = rebase_unit_first(a);
        working_ = std::move(r.algebra);
        to_working_ = std::move(r.to_new);
        to_original_ = std::move(r.to_old);
    } else {
        working_ = a;
        to_working_ = SparseMatrix::identity(a.dim(), a.field());
        to_original_ = to_working_;
    }
}

std::size_t HochschildComplex::chain_dim(int n) const {
    std::size_t dim = codec_.chain_dim(n);
    if (dim > limits_.max_chain_dim)
        throw ResourceLimitError("chain space C_" + std::to_string(n) + " of " + original_.name() + " exceeds " +
                                 std::to_string(limits_.max_chain_dim) + " dimensions");
    return dim;
}

std::size_t HochschildComplex::cochain_dim(int n) const {
    std::size_t dim = codec_.cochain_dim(n);
    if (dim > limits_.max_chain_dim)
        throw ResourceLimitError("cochain space C^" + std::to_string(n) + " of " + original_.name() + " exceeds " +
                                 std::to_string(limits_.max_chain_dim) + " dimensions");
    return dim;
}

const SparseMatrix& HochschildComplex::b(int n) const { return cached(Op::b, n); }

const SparseMatrix& HochschildComplex::bprime(int n) const {
    if (normalized()) throw std::logic_error("b' is only built on unnormalized chains");
    return cached(Op::bprime, n);
}

const SparseMatrix& HochschildComplex::t(int n) const {
    if (normalized()) throw std::logic_error("t is only built on unnormalized chains");
    return cached(Op::t, n);
}

const SparseMatrix& HochschildComplex::N(int n) const {
    if (normalized()) throw std::logic_error("N is only built on unnormalized chains");
    return cached(Op::N, n);
}

const SparseMatrix& HochschildComplex::connes_B(int n) const {
    if (!normalized()) throw std::logic_error("Connes' B is only built on normalized chains");
    return cached(Op::B, n);
}

const SparseMatrix& HochschildComplex::delta(int n) const { return cached(Op::delta, n); }

SparseMatrix HochschildComplex::b_or_zero(int n) const {
    if (n == 0) return SparseMatrix(0, chain_dim(0));
    return b(n);
}

const SparseMatrix& HochschildComplex::cached(Op op, int n) const {
    const std::pair<int, int> key{static_cast<int>(op), n};
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;
    }
    auto m = std::make_unique<SparseMatrix>(build(op, n));
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(m));
    return *it->second;
}

SparseMatrix HochschildComplex::build(Op op, int n) const {
    switch (op) {
        case Op::b:
        case Op::bprime:
            if (n < 1) throw std::invalid_argument("b and b' need degree n >= 1");
            return build_b(n, op == Op::b);
        case Op::t:
            if (n < 0) throw std::invalid_argument("negative degree");
            return build_t(n);
        case Op::N:
            if (n < 0) throw std::invalid_argument("negative degree");
            return build_N(n);
        case Op::B:
            if (n < 0) throw std::invalid_argument("negative degree");
            return build_B(n);
        case Op::delta:
            if (n < 0) throw std::invalid_argument("negative degree");
            return build_delta(n);
    }
    throw std::logic_error("unknown operator");
}

SparseMatrix HochschildComplex::build_b(int n, bool cyclic_term) const {
    const std::size_t rows = chain_dim(n - 1), cols = chain_dim(n);
    const Algebra& a = working_;
    const Field& f = field();
    const auto len = static_cast<std::size_t>(n) + 1;
    return build_by_columns(rows, cols, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> tup(len), out(len - 1);
        codec_.decode_chain(j, tup);
        for (std::size_t k = 0; k + 1 < len; ++k) {
            const Vector& p = a.product(tup[k], tup[k + 1]);
            if (p.is_zero()) continue;
            for (std::size_t s = 0; s < k; ++s) out[s] = tup[s];
            for (std::size_t s = k + 2; s < len; ++s) out[s - 1] = tup[s];
            const Scalar sg = sign(f, static_cast<long>(k));
            for (const auto& e : p.entries()) {
                out[k] = e.index;
                std::size_t idx = codec_.encode_chain(out);
                if (idx != TupleCodec::npos) acc.add(static_cast<std::uint32_t>(idx), sg * e.value);
            }
        }
        if (cyclic_term) {
            const Vector& p = a.product(tup[len - 1], tup[0]);
            if (p.is_zero()) return;
            for (std::size_t s = 1; s + 1 < len; ++s) out[s] = tup[s];
            const Scalar sg = sign(f, n);
            for (const auto& e : p.entries()) {
                out[0] = e.index;
                std::size_t idx = codec_.encode_chain(out);
                if (idx != TupleCodec::npos) acc.add(static_cast<std::uint32_t>(idx), sg * e.value);
            }
        }
    });
}

SparseMatrix HochschildComplex::build_t(int n) const {
    const std::size_t dim = chain_dim(n);
    const auto len = static_cast<std::size_t>(n) + 1;
    const Scalar sg = sign(field(), n);
    return build_by_columns(dim, dim, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> tup(len), out(len);
        codec_.decode_chain(j, tup);
        out[0] = tup[len - 1];
        for (std::size_t s = 0; s + 1 < len; ++s) out[s + 1] = tup[s];
        acc.add(static_cast<std::uint32_t>(codec_.encode_chain(out)), sg);
    });
}

SparseMatrix HochschildComplex::build_N(int n) const {
    const std::size_t dim = chain_dim(n);
    const auto len = static_cast<std::size_t>(n) + 1;
    const Field& f = field();
    return build_by_columns(dim, dim, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> tup(len), out(len);
        codec_.decode_chain(j, tup);
        for (std::size_t r = 0; r < len; ++r) {
            // t^r moves the last r factors to the front
            for (std::size_t s = 0; s < len; ++s) out[(s + r) % len] = tup[s];
            acc.add(static_cast<std::uint32_t>(codec_.encode_chain(out)), sign(f, static_cast<long>(n) * r));
        }
    });
}

SparseMatrix HochschildComplex::build_B(int n) const {
    const std::size_t rows = chain_dim(n + 1), cols = chain_dim(n);
    const auto len = static_cast<std::size_t>(n) + 1;
    const Field& f = field();
    return build_by_columns(rows, cols, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> tup(len), out(len + 1);
        codec_.decode_chain(j, tup);
        out[0] = 0;
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t s = 0; s < len; ++s) out[1 + s] = tup[(i + s) % len];
            std::size_t idx = codec_.encode_chain(out);
            if (idx != TupleCodec::npos) acc.add(static_cast<std::uint32_t>(idx), sign(f, static_cast<long>(n) * i));
        }
    });
}

SparseMatrix HochschildComplex::build_delta(int n) const {
    const std::size_t rows = cochain_dim(n + 1), cols = cochain_dim(n);
    const Algebra& a = working_;
    const Field& f = field();
    const auto ni = static_cast<std::size_t>(n);
    const std::uint32_t first = normalized() ? 1 : 0;
    const auto d = static_cast<std::uint32_t>(this->d());
    return build_by_columns(rows, cols, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> u(ni), in(ni + 1);
        const std::uint32_t o = codec_.decode_cochain(j, u);
        // a_1 f(a_2, ..., a_{n+1})
        for (std::size_t s = 0; s < ni; ++s) in[s + 1] = u[s];
        for (std::uint32_t a1 = first; a1 < d; ++a1) {
            in[0] = a1;
            for (const auto& e : a.product(a1, o).entries())
                acc.add(static_cast<std::uint32_t>(codec_.encode_cochain(in, e.index)), e.value);
        }
        // (-1)^i f(a_1, ..., a_i a_{i+1}, ..., a_{n+1})
        for (std::size_t i = 1; i <= ni; ++i) {
            const Scalar sg = sign(f, static_cast<long>(i));
            for (std::size_t s = 0; s + 1 < i; ++s) in[s] = u[s];
            for (std::size_t s = i; s < ni; ++s) in[s + 1] = u[s];
            for (const auto& fac : a.factorizations(u[i - 1])) {
                if (fac.i < first || fac.j < first) continue;
                in[i - 1] = static_cast<std::uint32_t>(fac.i);
                in[i] = static_cast<std::uint32_t>(fac.j);
                acc.add(static_cast<std::uint32_t>(codec_.encode_cochain(in, o)), sg * fac.coeff);
            }
        }
        // (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
        const Scalar sg = sign(f, static_cast<long>(ni) + 1);
        for (std::size_t s = 0; s < ni; ++s) in[s] = u[s];
        for (std::uint32_t last = first; last < d; ++last) {
            in[ni] = last;
            for (const auto& e : a.product(o, last).entries())
                acc.add(static_cast<std::uint32_t>(codec_.encode_cochain(in, e.index)), sg * e.value);
        }
    });
}

std::vector<HomologySpace> hochschild_homology(const HochschildComplex& c, int D) {
    if (D < 0) throw std::invalid_argument("negative maximal degree");
    c.chain_dim(D + 1);
    std::vector<HomologySpace> out(static_cast<std::size_t>(D) + 1);
    for (int n = 0; n <= D; ++n) out[n] = homology_at(c.b(n + 1), c.b_or_zero(n), c.field(), n);
    return out;
}

std::vector<HomologySpace> hochschild_cohomology(const HochschildComplex& c, int D) {
    if (D < 0) throw std::invalid_argument("negative maximal degree");
    c.cochain_dim(D + 1);
    std::vector<HomologySpace> out(static_cast<std::size_t>(D) + 1);
    for (int n = 0; n <= D; ++n) {
        SparseMatrix incoming = n == 0 ? SparseMatrix(c.cochain_dim(0), 0) : c.delta(n - 1);
        out[n] = homology_at(incoming, c.delta(n), c.field(), n);
    }
    return out;
}

SparseMatrix normalization_map(const HochschildComplex& un, const HochschildComplex& norm, int n) {
    if (un.normalized() || !norm.normalized() || un.d() != norm.d())
        throw std::invalid_argument("normalization_map: expects an unnormalized and a normalized complex");
    const std::size_t rows = norm.chain_dim(n), cols = un.chain_dim(n);
    const auto len = static_cast<std::size_t>(n) + 1;
    // slot images of the unnormalized complex's basis vectors in the unit-first basis
    SparseMatrix slot = norm.to_working() * un.to_original();
    const Field& f = un.field();
    return build_by_columns(rows, cols, [&](std::size_t j, Accumulator& acc) {
        std::vector<std::uint32_t> tup(len), out(len);
        un.codec().decode_chain(j, tup);
        // depth-first expansion of the tensor product of slot images
        std::vector<std::size_t> pos(len, 0);
        std::vector<Scalar> coeff(len + 1, f.one());
        std::size_t k = 0;
        while (true) {
            const auto& entries = slot.column(tup[k]).entries();
            if (pos[k] < entries.size()) {
                const auto& e = entries[pos[k]++];
                if (k > 0 && e.index == 0) continue;
                out[k] = e.index;
                coeff[k + 1] = coeff[k] * e.value;
                if (k + 1 == len) {
                    acc.add(static_cast<std::uint32_t>(norm.codec().encode_chain(out)), coeff[k + 1]);
                } else {
                    ++k;
                    pos[k] = 0;
                }
            } else {
                if (k == 0) break;
                --k;
            }
        }
    });
}

SparseMatrix boundary_b(const Algebra& a, int n) { return HochschildComplex(a).b(n); }
SparseMatrix boundary_bprime(const Algebra& a, int n) { return HochschildComplex(a).bprime(n); }
SparseMatrix cyclic_t(const Algebra& a, int n) { return HochschildComplex(a).t(n); }
SparseMatrix cyclic_N(const Algebra& a, int n) { return HochschildComplex(a).N(n); }
SparseMatrix cochain_delta(const Algebra& a, int n) { return HochschildComplex(a).delta(n); }

}  // namespace ttcalc

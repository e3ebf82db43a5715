#include "ttcalc/cyclic.hpp"

#include <algorithm>
#include <string>

#include "ttcalc/calculus.hpp"
#include "ttcalc/errors.hpp"

namespace ttcalc {

namespace {

std::string entry_text(const SparseMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m.column(j).is_zero()) {
            const auto& e = m.column(j).entries().front();
            return "entry (" + std::to_string(e.index) + ", " + std::to_string(j) + ") = " + e.value.to_string();
        }
    return {};
}

SparseMatrix identity_block(std::size_t rows, std::size_t cols, std::size_t row0, std::size_t col0, std::size_t n,
                            const Field& f) {
    SparseMatrix m(rows, cols);
    m.add_block(row0, col0, SparseMatrix::identity(n, f));
    return m;
}

void guard(std::size_t dim, const Limits& limits, const std::string& what) {
    if (dim > limits.max_chain_dim)
        throw ResourceLimitError(what + " has dimension " + std::to_string(dim) + " > " +
                                 std::to_string(limits.max_chain_dim));
}

}  // namespace

MixedComplex cone_mixed_complex(const Algebra& a, int D, NMutation mutation, Limits limits) {
    if (D < 0) throw std::invalid_argument("negative maximal degree");
    HochschildComplex c(a, false, limits);
    const Field& f = c.field();
    const int top = D + 1;
    MixedComplex m;
    m.model = "cone";
    m.field = f;
    auto chain = [&](int n) { return n < 0 ? std::size_t{0} : c.chain_dim(n); };
    for (int n = 0; n <= top; ++n) m.dims.push_back(chain(n) + chain(n - 1));
    auto N = [&](int n) {
        SparseMatrix out = c.N(n);
        return mutation.enabled && n == mutation.degree ? -out : out;
    };
    for (int n = 0; n <= top; ++n) {
        SparseMatrix d1(n == 0 ? 0 : m.dims[n - 1], m.dims[n]);
        if (n >= 1) {
            d1.add_block(0, 0, c.b(n));
            d1.add_block(0, chain(n), SparseMatrix::identity(chain(n - 1), f) - c.t(n - 1));
        }
        if (n >= 2) d1.add_block(chain(n - 1), chain(n), -c.bprime(n - 1));
        m.d1.push_back(std::move(d1));
    }
    for (int n = 0; n < top; ++n) {
        SparseMatrix d2(m.dims[n + 1], m.dims[n]);
        d2.add_block(chain(n + 1), 0, N(n));
        m.d2.push_back(std::move(d2));
    }
    return m;
}

MixedComplex normalized_mixed_complex(const Algebra& a, int D, Limits limits) {
    if (D < 0) throw std::invalid_argument("negative maximal degree");
    HochschildComplex c(a, true, limits);
    const int top = D + 1;
    MixedComplex m;
    m.model = "normalized";
    m.field = c.field();
    for (int n = 0; n <= top; ++n) {
        m.dims.push_back(c.chain_dim(n));
        m.d1.push_back(c.b_or_zero(n));
    }
    for (int n = 0; n < top; ++n) m.d2.push_back(c.connes_B(n));
    return m;
}

Report check_mixed(const MixedComplex& m, const std::string& prefix) {
    Report r;
    auto record = [&](std::string id, const SparseMatrix& product) {
        if (product.is_zero())
            r.pass(std::move(id));
        else
            r.fail(std::move(id), entry_text(product));
    };
    const int top = m.top();
    for (int n = 2; n <= top; ++n) record(prefix + ".d1sq.n" + std::to_string(n), m.d1[n - 1] * m.d1[n]);
    for (int n = 0; n + 2 <= top; ++n) record(prefix + ".d2sq.n" + std::to_string(n), m.d2[n + 1] * m.d2[n]);
    for (int n = 0; n < top; ++n) {
        // M_n -> M_n
        SparseMatrix s = m.d1[n + 1] * m.d2[n];
        if (n >= 1) s += m.d2[n - 1] * m.d1[n];
        record(prefix + ".anti.n" + std::to_string(n), s);
    }
    return r;
}

std::size_t total_dim(const MixedComplex& m, int n) {
    if (n < 0) return 0;
    if (n > m.top()) throw std::out_of_range("total degree beyond the materialized mixed complex");
    std::size_t dim = 0;
    for (int q = n; q >= 0; q -= 2) dim += m.dims[q];
    return dim;
}

std::size_t total_offset(const MixedComplex& m, int n, int p) {
    std::size_t off = 0;
    for (int k = 0; k < p; ++k) off += m.dims[n - 2 * k];
    return off;
}

SparseMatrix total_differential(const MixedComplex& m, int n, Limits limits) {
    const std::size_t cols = total_dim(m, n), rows = total_dim(m, n - 1);
    guard(cols, limits, "Tot_" + std::to_string(n));
    SparseMatrix d(rows, cols);
    for (int p = 0; 2 * p <= n; ++p) {
        const int q = n - 2 * p;
        const std::size_t col = total_offset(m, n, p);
        if (q >= 1) d.add_block(total_offset(m, n - 1, p), col, m.d1[q]);
        if (p >= 1) d.add_block(total_offset(m, n - 1, p - 1), col, m.d2[q]);
    }
    return d;
}

std::vector<HomologySpace> cyclic_homology(const MixedComplex& m, int D, Limits limits) {
    if (D < 0) throw std::invalid_argument("negative maximal degree");
    if (m.top() < D + 1) throw std::invalid_argument("mixed complex too short for HC through degree D");
    std::vector<SparseMatrix> d;
    for (int n = 0; n <= D + 1; ++n) d.push_back(total_differential(m, n, limits));
    std::vector<HomologySpace> out;
    for (int n = 0; n <= D; ++n) out.push_back(homology_at(d[n + 1], d[n], m.field, n));
    return out;
}

CyclicTable sbi_maps(const MixedComplex& m, int D, Limits limits) {
    if (m.top() < D + 1) throw std::invalid_argument("mixed complex too short for HC through degree D");
    const Field& f = m.field;
    CyclicTable t;
    t.D = D;
    std::vector<SparseMatrix> tot;
    for (int n = 0; n <= D + 1; ++n) tot.push_back(total_differential(m, n, limits));
    for (int n = 0; n <= D; ++n) {
        SparseMatrix in = m.d1[n + 1], out = m.d1[n];
        t.hh.push_back(homology_at(in, out, f, n));
        t.hc.push_back(homology_at(tot[n + 1], tot[n], f, n));
    }
    for (int n = 0; n <= D; ++n) {
        SparseMatrix incl = identity_block(total_dim(m, n), m.dims[n], 0, 0, m.dims[n], f);
        t.I.push_back(t.hh[n].induced(incl, t.hc[n]));
        if (n < 2) {
            t.S.push_back(SparseMatrix(0, t.hc[n].dim()));
        } else {
            const std::size_t rest = total_dim(m, n - 2);
            SparseMatrix proj = identity_block(rest, total_dim(m, n), 0, m.dims[n], rest, f);
            t.S.push_back(t.hc[n].induced(proj, t.hc[n - 2]));
        }
    }
    // Connecting map of 0 -> M -> Tot -> Tot[-2] -> 0: lift through the
    // quotient, apply the total differential, read off the M_{n+1} part.
    for (int n = 0; n < D; ++n) {
        const std::size_t here = total_dim(m, n), up = total_dim(m, n + 2), head = m.dims[n + 2];
        SparseMatrix quotient = identity_block(here, up, 0, head, here, f);
        Vector shift(head);
        for (std::uint32_t k = 0; k < std::min<std::size_t>(head, 3); ++k) shift.push_back(k, f.one());
        const Vector offset = shift.embedded(up, 0);
        std::vector<Vector> cols, alt;
        for (const Vector& rep : t.hc[n].representatives()) {
            auto lift = solve(quotient, rep);
            if (!lift) throw InvariantError("connecting map: class of HC_" + std::to_string(n) + " does not lift");
            for (int pass = 0; pass < 2; ++pass) {
                Vector image = tot[n + 2].apply(pass == 0 ? *lift : *lift + offset);
                const std::size_t keep = m.dims[n + 1];
                for (const auto& e : image.entries())
                    if (e.index >= keep)
                        throw InvariantError("connecting map: lifted boundary leaves M_" + std::to_string(n + 1));
                Vector b = image.slice(0, keep);
                (pass == 0 ? cols : alt).push_back(t.hh[n + 1].project(b));
            }
        }
        t.Bprime.push_back(SparseMatrix::from_columns(t.hh[n + 1].dim(), std::move(cols)));
        t.Bprime_alt.push_back(SparseMatrix::from_columns(t.hh[n + 1].dim(), std::move(alt)));
    }
    return t;
}

namespace {

// Exactness of X_prev -f-> X -g-> X_next at X.
void exact_at(Report& r, const std::string& id, const SparseMatrix& f, const SparseMatrix& g, std::size_t dim) {
    SparseMatrix gf = g * f;
    if (!gf.is_zero()) {
        r.fail(id, "composite nonzero: " + entry_text(gf));
        return;
    }
    const std::size_t rf = rank(f), rg = rank(g);
    if (rf + rg != dim)
        r.fail(id, "rank(in) + rank(out) = " + std::to_string(rf) + " + " + std::to_string(rg) +
                       " != dim = " + std::to_string(dim));
    else
        r.pass(id);
}

void check_table(Report& r, const std::string& prefix, const CyclicTable& t) {
    const int D = t.D;
    for (int n = 0; n <= D; ++n) {
        const std::string deg = ".n" + std::to_string(n);
        // at HH_n: HC_{n-1} -B'-> HH_n -I-> HC_n
        SparseMatrix into_hh = n == 0 ? SparseMatrix(t.hh[0].dim(), 0) : t.Bprime[n - 1];
        exact_at(r, prefix + ".sbi.exact.hh" + deg, into_hh, t.I[n], t.hh[n].dim());
        // at HC_n: HH_n -I-> HC_n -S-> HC_{n-2}
        exact_at(r, prefix + ".sbi.exact.hc" + deg, t.I[n], t.S[n], t.hc[n].dim());
        // at HC_{n-2}: HC_n -S-> HC_{n-2} -B'-> HH_{n-1}
        if (n >= 2 && n - 2 < D)
            exact_at(r, prefix + ".sbi.exact.s" + deg, t.S[n], t.Bprime[n - 2], t.hc[n - 2].dim());
    }
    for (int n = 0; n < D; ++n) {
        const std::string id = prefix + ".sbi.lift.n" + std::to_string(n);
        if (t.Bprime[n] == t.Bprime_alt[n])
            r.pass(id);
        else
            r.fail(id, "second lift changes " + entry_text(t.Bprime[n] - t.Bprime_alt[n]));
    }
    const std::string id = prefix + ".hc0";
    if (t.hc[0].dim() == t.hh[0].dim() && rank(t.I[0]) == t.hh[0].dim())
        r.pass(id);
    else
        r.fail(id, "HC_0 has dimension " + std::to_string(t.hc[0].dim()) + ", HH_0 " +
                       std::to_string(t.hh[0].dim()));
}

}  // namespace

Report verify_sbi(const Algebra& a, int D, NMutation mutation, Limits limits) {
    Report r;
    std::vector<std::size_t> dims[2];
    const std::string prefixes[2] = {"cone", "norm"};
    CyclicTable norm_table;
    bool have_norm = false;
    for (int k = 0; k < 2; ++k) {
        MixedComplex m = k == 0 ? cone_mixed_complex(a, D, mutation, limits) : normalized_mixed_complex(a, D, limits);
        r.append(check_mixed(m, prefixes[k]));
        try {
            CyclicTable t = sbi_maps(m, D, limits);
            check_table(r, prefixes[k], t);
            for (const auto& h : t.hc) dims[k].push_back(h.dim());
            if (k == 1) {
                norm_table = std::move(t);
                have_norm = true;
            }
        } catch (const InvariantError& e) {
            r.fail(prefixes[k] + ".sbi.exact", std::string("total complex is not a complex: ") + e.what());
        }
    }
    if (have_norm) {
        CalculusTable calc(a, D, {}, limits);
        for (int n = 0; n < D; ++n) {
            const std::string id = "sbi.BI.n" + std::to_string(n);
            SparseMatrix bi = norm_table.Bprime[n] * norm_table.I[n];
            if (bi == calc.B(n))
                r.pass(id);
            else
                r.fail(id, "B'I - B has " + entry_text(bi - calc.B(n)));
        }
    }
    if (!dims[0].empty() && !dims[1].empty())
        for (int n = 0; n <= D; ++n) {
            const std::string id = "hc.models.n" + std::to_string(n);
            if (dims[0][n] == dims[1][n])
                r.pass(id);
            else
                r.fail(id, "cone " + std::to_string(dims[0][n]) + " vs normalized " + std::to_string(dims[1][n]));
        }
    return r;
}

}  // namespace ttcalc

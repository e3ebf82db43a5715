#include "ttcalc/transport.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "ttcalc/calculus.hpp"
#include "ttcalc/cyclic.hpp"
#include "ttcalc/errors.hpp"
#include "ttcalc/parallel.hpp"

namespace ttcalc {

// ---------------------------------------------------------------- BMatrix

BMatrix::BMatrix(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), dim_(dim), entries_(rows * cols, Vector(dim)) {}

BMatrix BMatrix::identity(const Algebra& b, std::size_t n) {
    BMatrix m(n, n, b.dim());
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = b.unit();
    return m;
}

BMatrix BMatrix::diagonal(std::size_t dim, const std::vector<Vector>& entries) {
    BMatrix m(entries.size(), entries.size(), dim);
    for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = entries[i];
    return m;
}

bool BMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Vector& v) { return v.is_zero(); });
}

BMatrix& BMatrix::operator+=(const BMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("BMatrix: shape mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
}

BMatrix& BMatrix::operator-=(const BMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("BMatrix: shape mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
}

BMatrix BMatrix::operator-() const {
    BMatrix m = *this;
    for (auto& v : m.entries_) v = -v;
    return m;
}

BMatrix multiply(const Algebra& b, const BMatrix& x, const BMatrix& y) {
    if (x.cols() != y.rows()) throw std::invalid_argument("BMatrix: inner dimensions differ");
    BMatrix out(x.rows(), y.cols(), b.dim());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) {
            Vector s(b.dim());
            for (std::size_t k = 0; k < x.cols(); ++k)
                if (!x.at(i, k).is_zero() && !y.at(k, j).is_zero()) s += b.multiply(x.at(i, k), y.at(k, j));
            out.at(i, j) = std::move(s);
        }
    return out;
}

SparseMatrix linear_map(const Algebra& b, const BMatrix& m) {
    const std::size_t e = b.dim();
    SparseMatrix out(m.rows() * e, m.cols() * e);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) out.add_block(i * e, j * e, b.left_multiplication(m.at(i, j)));
    return out;
}

namespace {

std::string element_text(const Algebra& b, const Vector& v) {
    if (v.is_zero()) return "0";
    std::string out;
    for (const auto& e : v.entries()) {
        std::string c = e.value.to_string();
        bool negative = !c.empty() && c[0] == '-';
        if (negative) c = c.substr(1);
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        if (c != "1") out += c + "*";
        out += b.basis()[e.index];
    }
    return out;
}

BMatrix combine(const Algebra& b, const std::vector<BMatrix>& basis_mats, const Vector& coeffs, std::size_t r) {
    BMatrix out(r, r, b.dim());
    for (const auto& e : coeffs.entries()) {
        BMatrix m = basis_mats[e.index];
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) m.at(i, j) *= e.value;
        out += m;
    }
    return out;
}

std::string bmatrix_diff(const Algebra& b, const BMatrix& lhs, const BMatrix& rhs) {
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j)
            if (!(lhs.at(i, j) == rhs.at(i, j)))
                return "entry (" + std::to_string(i) + ", " + std::to_string(j) + "): " +
                       element_text(b, lhs.at(i, j)) + " vs " + element_text(b, rhs.at(i, j));
    return {};
}

void expect(Report& r, const std::string& id, const Algebra& b, const BMatrix& lhs, const BMatrix& rhs,
            const std::string& context) {
    if (lhs == rhs)
        r.pass(id);
    else
        r.fail(id, context + bmatrix_diff(b, lhs, rhs));
}

std::string matrix_diff(const SparseMatrix& lhs, const SparseMatrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        return "shapes " + std::to_string(lhs.rows()) + "x" + std::to_string(lhs.cols()) + " vs " +
               std::to_string(rhs.rows()) + "x" + std::to_string(rhs.cols());
    auto mm = mismatches(lhs, rhs, 1);
    if (mm.empty()) return {};
    auto value = [](const SparseMatrix& m, std::size_t i, std::size_t j) {
        const Scalar* s = m.find(i, j);
        return s ? s->to_string() : std::string("0");
    };
    return "entry (" + std::to_string(mm[0].row) + ", " + std::to_string(mm[0].col) + "): " +
           value(lhs, mm[0].row, mm[0].col) + " vs " + value(rhs, mm[0].row, mm[0].col);
}

void expect(Report& r, const std::string& id, const SparseMatrix& lhs, const SparseMatrix& rhs) {
    if (lhs == rhs)
        r.pass(id);
    else
        r.fail(id, matrix_diff(lhs, rhs));
}

void expect_iso(Report& r, const std::string& id, const SparseMatrix& m) {
    if (m.rows() != m.cols())
        r.fail(id, "not square: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    else if (rank(m) != m.rows())
        r.fail(id, "rank " + std::to_string(rank(m)) + " < " + std::to_string(m.rows()));
    else
        r.pass(id);
}

SparseMatrix block_diagonal(const std::vector<const SparseMatrix*>& blocks) {
    std::size_t rows = 0, cols = 0;
    for (auto* b : blocks) rows += b->rows(), cols += b->cols();
    SparseMatrix out(rows, cols);
    std::size_t r = 0, c = 0;
    for (auto* b : blocks) {
        out.add_block(r, c, *b);
        r += b->rows();
        c += b->cols();
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- bimodules

const BimoduleTerm* DgBimodule::term(int p) const {
    if (terms.empty() || p < min_degree() || p > max_degree()) return nullptr;
    return &terms[static_cast<std::size_t>(p - min_degree())];
}

std::size_t DgBimodule::rank(int p) const {
    const BimoduleTerm* t = term(p);
    return t ? t->rank : 0;
}

BMatrix DgBimodule::action(const BimoduleTerm& t, std::size_t i) const {
    return multiply(target, multiply(target, t.idempotent, t.left_action[i]), t.idempotent);
}

Report validate_bimodule(const DgBimodule& x) {
    Report r;
    const Algebra& a = x.source;
    const Algebra& b = x.target;
    const std::size_t d = a.dim();
    for (std::size_t k = 0; k < x.terms.size(); ++k) {
        const BimoduleTerm& t = x.terms[k];
        const std::string deg = ".p" + std::to_string(t.degree);
        const std::size_t prev = k == 0 ? 0 : x.terms[k - 1].rank;
        std::string shape;
        if (t.degree != x.min_degree() + static_cast<int>(k)) shape = "degrees are not consecutive";
        if (t.idempotent.rows() != t.rank || t.idempotent.cols() != t.rank) shape = "idempotent is not rank x rank";
        if (t.differential.rows() != prev || t.differential.cols() != t.rank) shape = "differential has wrong shape";
        if (t.left_action.size() != d) shape = "left_action needs one matrix per source basis element";
        for (const auto& m : t.left_action)
            if (m.rows() != t.rank || m.cols() != t.rank) shape = "left action matrix is not rank x rank";
        if (!shape.empty()) {
            r.fail("bimodule.shape" + deg, shape);
            continue;
        }
        const BMatrix& E = t.idempotent;
        const BMatrix EE = multiply(b, E, E);
        expect(r, "bimodule.idempotent" + deg, b, EE, E, "E^2 != E at ");
        // xi_j(x_l) = E_jl and sum_j x_j xi_j(x_l) = x_l
        expect(r, "bimodule.dual_basis" + deg, b, EE, E, "sum x_j xi_j(x_l) != x_l at ");
        if (k > 0) {
            const BimoduleTerm& s = x.terms[k - 1];
            BMatrix ede = multiply(b, multiply(b, s.idempotent, t.differential), E);
            expect(r, "bimodule.presentation" + deg, b, ede, t.differential, "E d E != d at ");
            if (k > 1) {
                BMatrix dd = multiply(b, s.differential, t.differential);
                expect(r, "bimodule.d2" + deg, b, dd, BMatrix(dd.rows(), dd.cols(), b.dim()), "d^2 != 0 at ");
            }
        }
        std::vector<BMatrix> LE(d);
        for (std::size_t i = 0; i < d; ++i) LE[i] = multiply(b, t.left_action[i], E);
        expect(r, "bimodule.unit" + deg, b, combine(b, LE, a.unit(), t.rank), E, "L(1) E != E at ");

        std::string stable, action, chain;
        for (std::size_t i = 0; i < d && stable.empty(); ++i) {
            BMatrix ele = multiply(b, E, LE[i]);
            if (!(ele == LE[i])) stable = "L(" + a.basis()[i] + ") leaves the image of E: " + bmatrix_diff(b, ele, LE[i]);
        }
        for (std::size_t i = 0; i < d && action.empty(); ++i)
            for (std::size_t j = 0; j < d && action.empty(); ++j) {
                BMatrix lhs = multiply(b, t.left_action[i], LE[j]);
                BMatrix rhs = combine(b, LE, a.product(i, j), t.rank);
                if (!(lhs == rhs))
                    action = "L(" + a.basis()[i] + ") L(" + a.basis()[j] + ") != L(" + a.basis()[i] + "*" +
                             a.basis()[j] + "): " + bmatrix_diff(b, lhs, rhs);
            }
        if (k > 0) {
            const BimoduleTerm& s = x.terms[k - 1];
            for (std::size_t i = 0; i < d && chain.empty(); ++i) {
                BMatrix lhs = multiply(b, t.differential, LE[i]);
                BMatrix rhs = multiply(b, multiply(b, s.left_action[i], t.differential), E);
                if (!(lhs == rhs)) chain = "d L(" + a.basis()[i] + ") != L(" + a.basis()[i] + ") d: " + bmatrix_diff(b, lhs, rhs);
            }
        }
        auto record = [&](const std::string& id, const std::string& w) {
            if (w.empty())
                r.pass(id);
            else
                r.fail(id, w);
        };
        record("bimodule.stable" + deg, stable);
        record("bimodule.action" + deg, action);
        if (k > 0) record("bimodule.chain" + deg, chain);
    }
    return r;
}

DgBimodule regular_bimodule(const Algebra& a, int degree) {
    DgBimodule x{a, a, {}};
    BimoduleTerm t;
    t.degree = degree;
    t.rank = 1;
    t.idempotent = BMatrix::diagonal(a.dim(), {a.unit()});
    t.differential = BMatrix(0, 1, a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) t.left_action.push_back(BMatrix::diagonal(a.dim(), {a.basis_vector(i)}));
    x.terms.push_back(std::move(t));
    return x;
}

DgBimodule bimodule_from_morphism(const Algebra& a, const Algebra& b, const SparseMatrix& f) {
    if (f.rows() != b.dim() || f.cols() != a.dim())
        throw std::invalid_argument("bimodule_from_morphism: f must be dim B x dim A");
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            Vector lhs = f.apply(a.product(i, j));
            Vector rhs = b.multiply(f.column(i), f.column(j));
            if (!(lhs == rhs))
                throw DomainError("f is not multiplicative: f(" + a.basis()[i] + "*" + a.basis()[j] + ") = " +
                                  element_text(b, lhs) + " but f(" + a.basis()[i] + ")f(" + a.basis()[j] +
                                  ") = " + element_text(b, rhs));
        }
    DgBimodule x{a, b, {}};
    BimoduleTerm t;
    t.rank = 1;
    t.idempotent = BMatrix::diagonal(b.dim(), {f.apply(a.unit())});
    t.differential = BMatrix(0, 1, b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) t.left_action.push_back(BMatrix::diagonal(b.dim(), {f.column(i)}));
    x.terms.push_back(std::move(t));
    return x;
}

DgBimodule compose(const DgBimodule& x, const DgBimodule& y) {
    if (!same_structure(x.target, y.source))
        throw std::invalid_argument("compose: target of the first bimodule is not the source of the second");
    const Algebra& c = y.target;
    const std::size_t e = c.dim();
    // rho_q(beta) = F L^Y(beta) F
    auto rho = [&](const BimoduleTerm& q, const Vector& beta) {
        BMatrix m(q.rank, q.rank, e);
        for (const auto& en : beta.entries()) {
            BMatrix l = q.left_action[en.index];
            for (std::size_t i = 0; i < q.rank; ++i)
                for (std::size_t j = 0; j < q.rank; ++j) l.at(i, j) *= en.value;
            m += l;
        }
        return multiply(c, multiply(c, q.idempotent, m), q.idempotent);
    };
    auto rho_matrix = [&](const BimoduleTerm& q, const BMatrix& m) {
        BMatrix out(m.rows() * q.rank, m.cols() * q.rank, e);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m.at(i, j).is_zero()) continue;
                BMatrix blk = rho(q, m.at(i, j));
                for (std::size_t u = 0; u < q.rank; ++u)
                    for (std::size_t v = 0; v < q.rank; ++v) out.at(i * q.rank + u, j * q.rank + v) = blk.at(u, v);
            }
        return out;
    };
    DgBimodule z{x.source, c, {}};
    if (x.terms.empty() || y.terms.empty()) return z;
    const int lo = x.min_degree() + y.min_degree(), hi = x.max_degree() + y.max_degree();
    struct Piece {
        int p, q;
        std::size_t offset;
    };
    std::vector<std::vector<Piece>> pieces;
    std::vector<std::size_t> ranks;
    for (int n = lo; n <= hi; ++n) {
        std::vector<Piece> list;
        std::size_t off = 0;
        for (int p = x.min_degree(); p <= x.max_degree(); ++p) {
            const int q = n - p;
            if (!y.term(q)) continue;
            list.push_back({p, q, off});
            off += x.rank(p) * y.rank(q);
        }
        pieces.push_back(list);
        ranks.push_back(off);
    }
    for (int n = lo; n <= hi; ++n) {
        const auto& here = pieces[n - lo];
        BimoduleTerm t;
        t.degree = n;
        t.rank = ranks[n - lo];
        t.idempotent = BMatrix(t.rank, t.rank, e);
        t.left_action.assign(x.source.dim(), BMatrix(t.rank, t.rank, e));
        const std::size_t prev = n == lo ? 0 : ranks[n - lo - 1];
        t.differential = BMatrix(prev, t.rank, e);
        auto place = [](BMatrix& dst, std::size_t r0, std::size_t c0, const BMatrix& src) {
            for (std::size_t i = 0; i < src.rows(); ++i)
                for (std::size_t j = 0; j < src.cols(); ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
        };
        for (const Piece& pc : here) {
            const BimoduleTerm& xp = *x.term(pc.p);
            const BimoduleTerm& yq = *y.term(pc.q);
            place(t.idempotent, pc.offset, pc.offset, rho_matrix(yq, xp.idempotent));
            for (std::size_t i = 0; i < x.source.dim(); ++i)
                place(t.left_action[i], pc.offset, pc.offset, rho_matrix(yq, xp.left_action[i]));
            if (n == lo) continue;
            for (const Piece& lower : pieces[n - lo - 1]) {
                if (lower.p == pc.p - 1 && lower.q == pc.q) {
                    place(t.differential, lower.offset, pc.offset, rho_matrix(yq, xp.differential));
                } else if (lower.p == pc.p && lower.q == pc.q - 1) {
                    BMatrix blk(xp.rank * y.rank(lower.q), xp.rank * yq.rank, e);
                    for (std::size_t i = 0; i < xp.rank; ++i)
                        for (std::size_t u = 0; u < yq.differential.rows(); ++u)
                            for (std::size_t v = 0; v < yq.rank; ++v)
                                blk.at(i * yq.differential.rows() + u, i * yq.rank + v) =
                                    pc.p % 2 ? -yq.differential.at(u, v) : yq.differential.at(u, v);
                    place(t.differential, lower.offset, pc.offset, blk);
                }
            }
        }
        z.terms.push_back(std::move(t));
    }
    return z;
}

DgBimodule direct_sum(const DgBimodule& x, const DgBimodule& y) {
    if (!same_structure(x.source, y.source) || !same_structure(x.target, y.target))
        throw std::invalid_argument("direct_sum: algebras differ");
    if (x.terms.empty()) return y;
    if (y.terms.empty()) return x;
    const std::size_t e = x.target.dim();
    DgBimodule z{x.source, x.target, {}};
    const int lo = std::min(x.min_degree(), y.min_degree()), hi = std::max(x.max_degree(), y.max_degree());
    auto diag = [&](const BMatrix& u, const BMatrix& v) {
        BMatrix m(u.rows() + v.rows(), u.cols() + v.cols(), e);
        for (std::size_t i = 0; i < u.rows(); ++i)
            for (std::size_t j = 0; j < u.cols(); ++j) m.at(i, j) = u.at(i, j);
        for (std::size_t i = 0; i < v.rows(); ++i)
            for (std::size_t j = 0; j < v.cols(); ++j) m.at(u.rows() + i, u.cols() + j) = v.at(i, j);
        return m;
    };
    auto part = [&](const DgBimodule& w, int p) {
        if (const BimoduleTerm* t = w.term(p)) {
            BimoduleTerm c = *t;
            if (p == lo || !w.term(p - 1)) c.differential = BMatrix(p == lo ? 0 : 0, c.rank, e);
            return c;
        }
        BimoduleTerm c;
        c.degree = p;
        c.idempotent = BMatrix(0, 0, e);
        c.differential = BMatrix(0, 0, e);
        c.left_action.assign(w.source.dim(), BMatrix(0, 0, e));
        return c;
    };
    for (int p = lo; p <= hi; ++p) {
        BimoduleTerm u = part(x, p), v = part(y, p);
        BimoduleTerm t;
        t.degree = p;
        t.rank = u.rank + v.rank;
        t.idempotent = diag(u.idempotent, v.idempotent);
        for (std::size_t i = 0; i < x.source.dim(); ++i) t.left_action.push_back(diag(u.left_action[i], v.left_action[i]));
        const std::size_t ux = p == lo ? 0 : x.rank(p - 1), vy = p == lo ? 0 : y.rank(p - 1);
        BMatrix du = u.differential.rows() == ux ? u.differential : BMatrix(ux, u.rank, e);
        BMatrix dv = v.differential.rows() == vy ? v.differential : BMatrix(vy, v.rank, e);
        t.differential = diag(du, dv);
        z.terms.push_back(std::move(t));
    }
    return z;
}

// ---------------------------------------------------------------- End complex

EndComplex end_complex(const DgBimodule& x) {
    const Algebra& b = x.target;
    const Field& f = b.field();
    const std::size_t e = b.dim();
    EndComplex out;
    const int width = x.max_degree() - x.min_degree();
    out.min_degree = -width;
    out.max_degree = width;
    // offset of the block p -> p + n inside degree n
    auto offset = [&](int n, int p) {
        std::size_t off = 0;
        for (int s = x.min_degree(); s < p; ++s) off += x.rank(s + n) * x.rank(s) * e;
        return off;
    };
    for (int n = out.min_degree; n <= out.max_degree; ++n) out.dims.push_back(offset(n, x.max_degree() + 1));
    auto unit_matrix = [&](std::size_t rows, std::size_t cols, std::size_t i, std::size_t j, std::size_t k) {
        BMatrix m(rows, cols, e);
        m.at(i, j) = Vector::unit(e, k, f);
        return m;
    };
    auto flatten = [&](const BMatrix& m, std::size_t dim, std::size_t off) {
        Vector v(dim);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                for (const auto& en : m.at(i, j).entries())
                    v.push_back(static_cast<std::uint32_t>(off + (i * m.cols() + j) * e + en.index), en.value);
        return v;
    };
    for (int n = out.min_degree; n <= out.max_degree; ++n) {
        const std::size_t dim = out.dims[out.index(n)];
        const std::size_t below = n - 1 >= out.min_degree ? out.dims[out.index(n - 1)] : 0;
        std::vector<Vector> dcols, pcols;
        for (int p = x.min_degree(); p <= x.max_degree(); ++p) {
            const std::size_t rows = x.rank(p + n), cols = x.rank(p);
            if (!rows || !cols) continue;
            const BimoduleTerm& src = *x.term(p);
            const BimoduleTerm& dst = *x.term(p + n);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    for (std::size_t k = 0; k < e; ++k) {
                        BMatrix phi = unit_matrix(rows, cols, i, j, k);
                        BMatrix corner = multiply(b, multiply(b, dst.idempotent, phi), src.idempotent);
                        pcols.push_back(flatten(corner, dim, offset(n, p)));
                        // (D phi) = d phi - (-1)^n phi d, landing in degree n - 1
                        Vector dphi(below);
                        if (n - 1 >= out.min_degree) {
                            if (x.term(p + n - 1)) {
                                BMatrix m = multiply(b, dst.differential, phi);
                                dphi += flatten(m, below, offset(n - 1, p));
                            }
                            if (const BimoduleTerm* up = x.term(p + 1)) {
                                BMatrix m = multiply(b, phi, up->differential);
                                if (n % 2 == 0) m = -m;
                                dphi += flatten(m, below, offset(n - 1, p + 1));
                            }
                        }
                        dcols.push_back(std::move(dphi));
                    }
        }
        out.differential.push_back(SparseMatrix::from_columns(below, std::move(dcols)));
        out.corner.push_back(SparseMatrix::from_columns(dim, std::move(pcols)));
    }
    for (int n = out.min_degree; n <= out.max_degree; ++n) {
        const std::size_t dim = out.dims[out.index(n)];
        SparseMatrix incoming = n + 1 <= out.max_degree
                                    ? out.differential[out.index(n + 1)] * out.corner[out.index(n + 1)]
                                    : SparseMatrix(dim, 0);
        const SparseMatrix& dn = out.differential[out.index(n)];
        SparseMatrix outgoing(dn.rows() + dim, dim);
        outgoing.add_block(0, 0, dn);
        outgoing.add_block(dn.rows(), 0, SparseMatrix::identity(dim, f) - out.corner[out.index(n)]);
        out.homology.push_back(homology_at(incoming, outgoing, f, n));
    }
    std::vector<Vector> acols;
    const std::size_t dim0 = out.dims[out.index(0)];
    for (std::size_t i = 0; i < x.source.dim(); ++i) {
        Vector v(dim0);
        for (int p = x.min_degree(); p <= x.max_degree(); ++p) v += flatten(x.action(*x.term(p), i), dim0, offset(0, p));
        acols.push_back(std::move(v));
    }
    out.alpha = SparseMatrix::from_columns(dim0, std::move(acols));
    return out;
}

Report validate_derived_equivalence(const DgBimodule& x) {
    Report r;
    const Algebra& a = x.source;
    const Algebra& b = x.target;
    std::string mult;
    for (const auto& t : x.terms) {
        std::vector<BMatrix> act;
        for (std::size_t i = 0; i < a.dim(); ++i) act.push_back(x.action(t, i));
        for (std::size_t i = 0; i < a.dim() && mult.empty(); ++i)
            for (std::size_t j = 0; j < a.dim() && mult.empty(); ++j) {
                BMatrix lhs = multiply(b, act[i], act[j]);
                BMatrix rhs = combine(b, act, a.product(i, j), t.rank);
                if (!(lhs == rhs))
                    mult = "degree " + std::to_string(t.degree) + ": alpha(" + a.basis()[i] + ") alpha(" +
                           a.basis()[j] + ") != alpha(" + a.basis()[i] + "*" + a.basis()[j] + "): " +
                           bmatrix_diff(b, lhs, rhs);
            }
    }
    if (mult.empty())
        r.pass("equiv.alpha.mult");
    else
        r.fail("equiv.alpha.mult", mult);
    EndComplex end;
    try {
        end = end_complex(x);
    } catch (const InvariantError& e) {
        r.fail("equiv.end", std::string("End complex is not a complex: ") + e.what());
        return r;
    }
    for (int n = end.min_degree; n <= end.max_degree; ++n) {
        if (n == 0) continue;
        const std::size_t h = end.homology[end.index(n)].dim();
        const std::string id = "equiv.H.n" + std::to_string(n);
        if (h == 0)
            r.pass(id);
        else
            r.fail(id, "H_" + std::to_string(n) + "(End) has dimension " + std::to_string(h));
    }
    const HomologySpace& h0 = end.homology[end.index(0)];
    std::vector<Vector> cols;
    std::string h0_fail;
    for (std::size_t i = 0; i < a.dim() && h0_fail.empty(); ++i) {
        auto c = h0.try_project(end.alpha.column(i));
        if (!c)
            h0_fail = "alpha(" + a.basis()[i] + ") is not a cycle";
        else
            cols.push_back(*c);
    }
    if (h0_fail.empty()) {
        SparseMatrix m = SparseMatrix::from_columns(h0.dim(), std::move(cols));
        if (h0.dim() != a.dim())
            h0_fail = "H_0(End) has dimension " + std::to_string(h0.dim()) + ", A has " + std::to_string(a.dim());
        else if (rank(m) != a.dim())
            h0_fail = "alpha has rank " + std::to_string(rank(m)) + " on H_0(End)";
    }
    if (h0_fail.empty())
        r.pass("equiv.H0.iso");
    else
        r.fail("equiv.H0.iso", h0_fail);
    return r;
}

// ---------------------------------------------------------------- traces

int trace_sign(TraceSign s, int p, int n) {
    long e = 0;
    switch (s) {
        case TraceSign::none: e = 0; break;
        case TraceSign::degree: e = p; break;
        case TraceSign::degree_times_n: e = static_cast<long>(p) * n; break;
        case TraceSign::degree_plus_degree_times_n: e = p + static_cast<long>(p) * n; break;
    }
    return e % 2 ? -1 : 1;
}

const char* to_string(TraceSign s) {
    switch (s) {
        case TraceSign::none: return "none";
        case TraceSign::degree: return "degree";
        case TraceSign::degree_times_n: return "degree_times_n";
        case TraceSign::degree_plus_degree_times_n: return "degree_plus_degree_times_n";
    }
    return "?";
}

namespace {

std::size_t checked_chain_dim(const HochschildComplex& c, int n) { return c.chain_dim(n); }

}  // namespace

SparseMatrix trace_map(const DgBimodule& x, int n, TraceSign s, Limits limits) {
    if (n < 0) throw std::invalid_argument("trace_map: negative degree");
    HochschildComplex ca(x.source, false, limits), cb(x.target, false, limits);
    const std::size_t rows = checked_chain_dim(cb, n), cols = checked_chain_dim(ca, n);
    const Field& f = x.target.field();
    const std::size_t e = x.target.dim();
    const auto len = static_cast<std::size_t>(n) + 1;
    struct Term {
        Scalar sign;
        std::size_t rank;
        std::vector<BMatrix> act;
    };
    std::vector<Term> terms;
    for (const auto& t : x.terms) {
        if (!t.rank) continue;
        Term term{f.from_int(trace_sign(s, t.degree, n)), t.rank, {}};
        for (std::size_t i = 0; i < x.source.dim(); ++i) term.act.push_back(x.action(t, i));
        terms.push_back(std::move(term));
    }
    std::vector<Vector> columns(cols);
    parallel_for(cols, [&](std::size_t begin, std::size_t end, std::size_t) {
        Accumulator acc(rows);
        std::vector<std::uint32_t> tup(len);
        struct Partial {
            std::size_t index;
            Scalar coeff;
        };
        std::vector<std::vector<Partial>> level(len + 1);
        for (std::size_t col = begin; col < end; ++col) {
            ca.codec().decode_chain(col, tup);
            for (const Term& t : terms) {
                // walk j_0 -> j_1 -> ... -> j_n -> j_0 through nonzero entries
                for (std::size_t j0 = 0; j0 < t.rank; ++j0) {
                    level[0].assign(1, Partial{0, t.sign});
                    std::vector<std::size_t> js(len + 1, 0);
                    js[0] = j0;
                    auto rec = [&](auto&& self, std::size_t i) -> void {
                        if (level[i].empty()) return;
                        const BMatrix& m = t.act[tup[i]];
                        const bool last = i + 1 == len;
                        const std::size_t lo = last ? j0 : 0, hi = last ? j0 + 1 : t.rank;
                        for (std::size_t jn = lo; jn < hi; ++jn) {
                            const Vector& entry = m.at(js[i], jn);
                            if (entry.is_zero()) continue;
                            auto& next = level[i + 1];
                            next.clear();
                            for (const Partial& pt : level[i])
                                for (const auto& en : entry.entries())
                                    next.push_back(Partial{pt.index * e + en.index, pt.coeff * en.value});
                            if (last) {
                                for (const Partial& pt : next) acc.add(static_cast<std::uint32_t>(pt.index), pt.coeff);
                            } else {
                                js[i + 1] = jn;
                                self(self, i + 1);
                            }
                        }
                    };
                    rec(rec, 0);
                }
            }
            columns[col] = acc.take();
        }
    }, 64);
    return SparseMatrix::from_columns(rows, std::move(columns));
}

SparseMatrix tensor_power_map(const Algebra& a, const Algebra& b, const SparseMatrix& f, int n, Limits limits) {
    if (f.rows() != b.dim() || f.cols() != a.dim()) throw std::invalid_argument("tensor_power_map: f must be dim B x dim A");
    HochschildComplex ca(a, false, limits), cb(b, false, limits);
    const std::size_t rows = cb.chain_dim(n), cols = ca.chain_dim(n);
    const auto len = static_cast<std::size_t>(n) + 1;
    const std::size_t e = b.dim();
    std::vector<Vector> columns(cols);
    parallel_for(cols, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<std::uint32_t> tup(len);
        for (std::size_t col = begin; col < end; ++col) {
            ca.codec().decode_chain(col, tup);
            std::vector<std::pair<std::size_t, Scalar>> cur{{0, b.field().one()}}, next;
            for (std::size_t i = 0; i < len && !cur.empty(); ++i) {
                next.clear();
                for (const auto& [idx, c] : cur)
                    for (const auto& en : f.column(tup[i]).entries()) next.emplace_back(idx * e + en.index, c * en.value);
                cur.swap(next);
            }
            Accumulator acc(rows);
            for (const auto& [idx, c] : cur) acc.add(static_cast<std::uint32_t>(idx), c);
            columns[col] = acc.take();
        }
    }, 64);
    return SparseMatrix::from_columns(rows, std::move(columns));
}

// ---------------------------------------------------------------- homology transport

namespace {

/// Unnormalized and normalized homology of one algebra with the comparison isomorphisms.
struct Side {
    HochschildComplex un, norm;
    std::vector<HomologySpace> hh_un, hh_norm;
    std::vector<SparseMatrix> nu, nu_inv;

    Side(const Algebra& a, int D, Limits limits) : un(a, false, limits), norm(a, true, limits) {
        hh_un = hochschild_homology(un, D);
        hh_norm = hochschild_homology(norm, D);
        for (int n = 0; n <= D; ++n) {
            nu.push_back(hh_un[n].induced(normalization_map(un, norm, n), hh_norm[n]));
            auto inv = inverse(nu.back());
            if (!inv) throw InvariantError("normalization map is not an isomorphism on HH_" + std::to_string(n));
            nu_inv.push_back(std::move(*inv));
        }
    }
};

std::vector<SparseMatrix> normalized_maps(const Side& a, const Side& b,
                                          const std::function<SparseMatrix(int)>& chain_map, int D) {
    std::vector<SparseMatrix> out;
    for (int n = 0; n <= D; ++n) {
        SparseMatrix raw = a.hh_un[n].induced(chain_map(n), b.hh_un[n]);
        out.push_back(b.nu[n] * raw * a.nu_inv[n]);
    }
    return out;
}

}  // namespace

std::vector<SparseMatrix> induced_on_hh(const Algebra& a, const Algebra& b,
                                        const std::function<SparseMatrix(int)>& chain_map, int D, Limits limits) {
    Side sa(a, D, limits), sb(b, D, limits);
    return normalized_maps(sa, sb, chain_map, D);
}

Report transport_report(const DgBimodule& x, int D, TraceSign s, Limits limits) {
    Report r = validate_bimodule(x);
    r.append(validate_derived_equivalence(x));
    if (!r.ok()) {
        r.note("ladder.skipped", false, "bimodule does not define a derived equivalence");
        return r;
    }
    const Algebra& a = x.source;
    const Algebra& b = x.target;
    std::vector<SparseMatrix> tr;
    for (int n = 0; n <= D; ++n) tr.push_back(trace_map(x, n, s, limits));

    HochschildComplex ua(a, false, limits), ub(b, false, limits);
    bool chain_ok = true;
    for (int n = 0; n <= D; ++n) {
        const std::string deg = ".n" + std::to_string(n);
        SparseMatrix lt = ub.t(n) * tr[n], rt = tr[n] * ua.t(n);
        expect(r, "trace.t" + deg, lt, rt);
        chain_ok = chain_ok && lt == rt;
        if (n == 0) continue;
        SparseMatrix lb = ub.b(n) * tr[n], rb = tr[n - 1] * ua.b(n);
        expect(r, "trace.b" + deg, lb, rb);
        SparseMatrix lp = ub.bprime(n) * tr[n], rp = tr[n - 1] * ua.bprime(n);
        expect(r, "trace.bprime" + deg, lp, rp);
        chain_ok = chain_ok && lb == rb && lp == rp;
    }
    if (!chain_ok) {
        r.note("ladder.skipped", false, std::string("trace is not a chain map under sign scheme ") + to_string(s));
        return r;
    }

    Side sa(a, D, limits), sb(b, D, limits);
    auto phi = normalized_maps(sa, sb, [&](int n) { return tr[n]; }, D);
    CalculusTable ca(a, D, {}, limits), cb(b, D, {}, limits);
    for (int n = 0; n <= D; ++n) expect_iso(r, "ladder.hh_iso.n" + std::to_string(n), phi[n]);
    for (int n = 0; n < D; ++n) expect(r, "ladder.B.n" + std::to_string(n), phi[n + 1] * ca.B(n), cb.B(n) * phi[n]);

    MixedComplex ma = cone_mixed_complex(a, D, {}, limits), mb = cone_mixed_complex(b, D, {}, limits);
    CyclicTable ta = sbi_maps(ma, D, limits), tb = sbi_maps(mb, D, limits);
    std::vector<SparseMatrix> cone_tr;
    for (int n = 0; n <= D; ++n) {
        SparseMatrix lower = n == 0 ? SparseMatrix(0, 0) : tr[n - 1];
        cone_tr.push_back(block_diagonal({&tr[n], &lower}));
    }
    std::vector<SparseMatrix> hh_c, hc_c;
    for (int n = 0; n <= D; ++n) {
        hh_c.push_back(ta.hh[n].induced(cone_tr[n], tb.hh[n]));
        std::vector<const SparseMatrix*> blocks;
        for (int q = n; q >= 0; q -= 2) blocks.push_back(&cone_tr[q]);
        hc_c.push_back(ta.hc[n].induced(block_diagonal(blocks), tb.hc[n]));
    }
    for (int n = 0; n <= D; ++n) {
        const std::string deg = ".n" + std::to_string(n);
        expect(r, "ladder.I" + deg, tb.I[n] * hh_c[n], hc_c[n] * ta.I[n]);
        if (n >= 2) expect(r, "ladder.S" + deg, tb.S[n] * hc_c[n], hc_c[n - 2] * ta.S[n]);
        if (n < D) expect(r, "ladder.Bprime" + deg, tb.Bprime[n] * hc_c[n], hh_c[n + 1] * ta.Bprime[n]);
        expect_iso(r, "ladder.hc_iso" + deg, hc_c[n]);
    }
    bool chain_b = true;
    for (int n = 0; n < D; ++n) chain_b = chain_b && mb.d2[n] * cone_tr[n] == cone_tr[n + 1] * ma.d2[n];
    r.note("ladder.chain_B", chain_b, "trace commutes with the cone model's N at chain level");
    return r;
}

CohomologyTransport transport_cohomology_solve(const DgBimodule& x, int D, TraceSign s, Limits limits) {
    CohomologyTransport out;
    const Algebra& a = x.source;
    const Algebra& b = x.target;
    const Field& f = b.field();
    Side sa(a, D, limits), sb(b, D, limits);
    auto phi = normalized_maps(sa, sb, [&](int n) { return trace_map(x, n, s, limits); }, D);
    CalculusTable ca(a, D, {}, limits), cb(b, D, {}, limits);
    out.unique = true;
    for (int m = 0; m <= D; ++m) {
        const std::size_t ha = ca.coh_dim(m), hb = cb.coh_dim(m);
        // K: one column per basis class of HH^m(B), rows over (n, z) of HH_{n-m}(B)
        std::vector<Vector> kcols(hb);
        std::vector<Vector> rhs(ha);
        std::size_t total = 0;
        for (int n = m; n <= D; ++n) total += ca.hh_dim(n) * cb.hh_dim(n - m);
        for (std::size_t l = 0; l < hb; ++l) kcols[l] = Vector(total);
        for (std::size_t k = 0; k < ha; ++k) rhs[k] = Vector(total);
        std::size_t row = 0;
        for (int n = m; n <= D; ++n) {
            const std::size_t rows_here = cb.hh_dim(n - m);
            for (std::size_t j = 0; j < ca.hh_dim(n); ++j) {
                Vector z = Vector::unit(ca.hh_dim(n), j, f);
                Vector image = phi[n].apply(z);
                for (std::size_t l = 0; l < hb; ++l)
                    kcols[l] += cb.iota_class(m, l, n).apply(image).embedded(total, row);
                for (std::size_t k = 0; k < ha; ++k)
                    rhs[k] += phi[n - m].apply(ca.iota_class(m, k, n).apply(z)).embedded(total, row);
                row += rows_here;
            }
        }
        SparseMatrix K = SparseMatrix::from_columns(total, std::move(kcols));
        const std::size_t rk = rank(K);
        const std::size_t freedom = ha ? hb - rk : 0;
        out.freedom.push_back(freedom);
        std::vector<Vector> tcols;
        std::string failure;
        for (std::size_t k = 0; k < ha && failure.empty(); ++k) {
            auto sol = solve(K, rhs[k]);
            if (!sol)
                failure = "no class T(alpha) intertwines cap for alpha = HH^" + std::to_string(m) + "#" + std::to_string(k);
            else
                tcols.push_back(std::move(*sol));
        }
        const std::string id = "cohomology.solve.m" + std::to_string(m);
        if (failure.empty())
            out.report.pass(id, freedom ? "solution space has dimension " + std::to_string(freedom) + " per class"
                                        : std::string("unique"));
        else
            out.report.fail(id, failure);
        if (!failure.empty() || freedom) out.unique = false;
        out.T.push_back(failure.empty() ? SparseMatrix::from_columns(hb, std::move(tcols)) : SparseMatrix(hb, ha));
    }
    if (!out.unique) {
        std::string dims;
        for (std::size_t m = 0; m < out.freedom.size(); ++m)
            dims += (m ? "," : "") + std::to_string(out.freedom[m]);
        out.report.note("cohomology.inconclusive", false, "T not unique; free dimensions per degree " + dims);
        out.T.clear();
        return out;
    }
    expect(out.report, "cohomology.unit", SparseMatrix::from_columns(cb.coh_dim(0), {out.T[0].apply(ca.unit_class())}),
           SparseMatrix::from_columns(cb.coh_dim(0), {cb.unit_class()}));
    for (int m = 0; m <= D; ++m)
        for (int n = 0; m + n <= D; ++n) {
            std::string failure;
            for (std::size_t i = 0; i < ca.coh_dim(m) && failure.empty(); ++i)
                for (std::size_t j = 0; j < ca.coh_dim(n) && failure.empty(); ++j) {
                    Vector al = Vector::unit(ca.coh_dim(m), i, f), be = Vector::unit(ca.coh_dim(n), j, f);
                    Vector lhs = out.T[m + n].apply(ca.cup(al, m, be, n));
                    Vector rhs = cb.cup(out.T[m].apply(al), m, out.T[n].apply(be), n);
                    if (!(lhs == rhs))
                        failure = "T(a u b) != T(a) u T(b) for a = HH^" + std::to_string(m) + "#" + std::to_string(i) +
                                  ", b = HH^" + std::to_string(n) + "#" + std::to_string(j);
                }
            const std::string id = "cohomology.cup.m" + std::to_string(m) + ".n" + std::to_string(n);
            if (failure.empty())
                out.report.pass(id);
            else
                out.report.fail(id, failure);
        }
    for (int m = 0; m <= D; ++m)
        for (int n = 0; n <= D; ++n) {
            const int target = m + n - 1;
            if (target < 0 || target > D) continue;
            std::string failure;
            for (std::size_t i = 0; i < ca.coh_dim(m) && failure.empty(); ++i)
                for (std::size_t j = 0; j < ca.coh_dim(n) && failure.empty(); ++j) {
                    Vector al = Vector::unit(ca.coh_dim(m), i, f), be = Vector::unit(ca.coh_dim(n), j, f);
                    Vector lhs = out.T[target].apply(ca.bracket(al, m, be, n));
                    Vector rhs = cb.bracket(out.T[m].apply(al), m, out.T[n].apply(be), n);
                    if (!(lhs == rhs))
                        failure = "T[a,b] != [T(a),T(b)] for a = HH^" + std::to_string(m) + "#" + std::to_string(i) +
                                  ", b = HH^" + std::to_string(n) + "#" + std::to_string(j);
                }
            const std::string id = "cohomology.bracket.m" + std::to_string(m) + ".n" + std::to_string(n);
            if (failure.empty())
                out.report.pass(id);
            else
                out.report.fail(id, failure);
        }
    return out;
}

// ---------------------------------------------------------------- JSON

Vector parse_element(const Algebra& b, const std::string& text) {
    const Field& f = b.field();
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty algebra element");
    Vector out(b.dim());
    std::size_t pos = 0;
    while (pos < s.size()) {
        bool negative = false;
        if (s[pos] == '+' || s[pos] == '-') {
            negative = s[pos] == '-';
            ++pos;
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        const std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw ParseError("malformed element '" + text + "'");
        pos = end;
        Scalar coeff = f.one();
        std::string label = term;
        if (auto star = term.find('*'); star != std::string::npos) {
            coeff = f.parse(term.substr(0, star));
            label = term.substr(star + 1);
        }
        if (negative) coeff = -coeff;
        auto it = std::find(b.basis().begin(), b.basis().end(), label);
        Vector v(b.dim());
        if (it != b.basis().end()) {
            v = Vector::unit(b.dim(), static_cast<std::size_t>(it - b.basis().begin()), f);
        } else if (term.find('*') == std::string::npos) {
            coeff = f.parse(label);
            if (negative) coeff = -coeff;
            v = b.unit();
        } else {
            throw ParseError("unknown basis label '" + label + "' in '" + text + "'");
        }
        out.axpy(coeff, v);
    }
    return out;
}

namespace {

Vector element_from_json(const Json& j, const Algebra& b) {
    if (j.is_string()) return parse_element(b, j.get<std::string>());
    if (j.is_array()) return vector_from_json(j, b.field(), b.dim());
    if (j.is_number_integer()) return b.field().from_int(j.get<long long>()) * b.unit();
    throw ParseError("algebra element must be a string or a coefficient array");
}

BMatrix bmatrix_from_json(const Json& j, const Algebra& b, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array() || j.size() != rows) throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
    BMatrix m(rows, cols, b.dim());
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ParseError(what + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k) m.at(i, k) = element_from_json(j[i][k], b);
    }
    return m;
}

Json bmatrix_to_json(const Algebra& b, const BMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(element_text(b, m.at(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Algebra algebra_ref(const Json& j, std::optional<Field> field, const std::string& base_dir) {
    if (j.is_object()) return algebra_from_json(j, field);
    if (!j.is_string()) throw ParseError("source/target must be a family name, a path or an algebra document");
    const std::string ref = j.get<std::string>();
    std::filesystem::path p(ref);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    if (ref.find(".json") != std::string::npos && std::filesystem::exists(p)) return load_algebra(p.string(), field);
    return load_algebra(ref, field);
}

}  // namespace

DgBimodule bimodule_from_json(const Json& j, std::optional<Field> field_override, const std::string& base_dir) {
    if (!j.is_object()) throw ParseError("bimodule document must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "source" && key != "target" && key != "degrees" && key != "terms" && key != "name" &&
            key != "comment")
            throw ParseError("unknown bimodule key '" + key + "'");
    for (const char* key : {"source", "target", "degrees", "terms"})
        if (!j.contains(key)) throw ParseError(std::string("bimodule document lacks '") + key + "'");
    DgBimodule x{algebra_ref(j["source"], field_override, base_dir), algebra_ref(j["target"], field_override, base_dir), {}};
    if (!(x.source.field() == x.target.field())) throw ParseError("source and target are over different fields");
    const Json& deg = j["degrees"];
    if (!deg.is_array() || deg.size() != 2 || !deg[0].is_number_integer() || !deg[1].is_number_integer())
        throw ParseError("degrees must be [min, max]");
    const int lo = deg[0].get<int>(), hi = deg[1].get<int>();
    if (lo > hi) throw ParseError("degrees: min > max");
    const Json& terms = j["terms"];
    if (!terms.is_array() || terms.size() != static_cast<std::size_t>(hi - lo + 1))
        throw ParseError("terms must list every degree from min to max");
    std::size_t prev = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const Json& t = terms[k];
        if (!t.is_object()) throw ParseError("each term must be an object");
        for (const auto& [key, _] : t.items())
            if (key != "degree" && key != "rank" && key != "idempotent" && key != "differential" && key != "left_action")
                throw ParseError("unknown term key '" + key + "'");
        BimoduleTerm term;
        term.degree = lo + static_cast<int>(k);
        if (t.contains("degree") && (!t["degree"].is_number_integer() || t["degree"].get<int>() != term.degree))
            throw ParseError("terms must be listed in increasing degree");
        if (!t.contains("rank") || !t["rank"].is_number_unsigned()) throw ParseError("term lacks a nonnegative rank");
        term.rank = t["rank"].get<std::size_t>();
        const std::string where = "degree " + std::to_string(term.degree);
        term.idempotent = t.contains("idempotent")
                              ? bmatrix_from_json(t["idempotent"], x.target, term.rank, term.rank, where + " idempotent")
                              : BMatrix::identity(x.target, term.rank);
        if (k == 0) {
            if (t.contains("differential") && !(t["differential"].is_array() && t["differential"].empty()))
                throw ParseError("the lowest degree has no differential");
            term.differential = BMatrix(0, term.rank, x.target.dim());
        } else {
            term.differential = t.contains("differential")
                                    ? bmatrix_from_json(t["differential"], x.target, prev, term.rank, where + " differential")
                                    : BMatrix(prev, term.rank, x.target.dim());
        }
        if (!t.contains("left_action") || !t["left_action"].is_array() || t["left_action"].size() != x.source.dim())
            throw ParseError(where + ": left_action needs one matrix per source basis element");
        for (std::size_t i = 0; i < x.source.dim(); ++i)
            term.left_action.push_back(bmatrix_from_json(t["left_action"][i], x.target, term.rank, term.rank,
                                                         where + " left_action[" + std::to_string(i) + "]"));
        prev = term.rank;
        x.terms.push_back(std::move(term));
    }
    return x;
}

Json bimodule_to_json(const DgBimodule& x) {
    Json j;
    j["source"] = algebra_to_json(x.source);
    j["target"] = algebra_to_json(x.target);
    j["degrees"] = Json::array({x.min_degree(), x.max_degree()});
    Json terms = Json::array();
    for (const auto& t : x.terms) {
        Json term;
        term["degree"] = t.degree;
        term["rank"] = t.rank;
        term["idempotent"] = bmatrix_to_json(x.target, t.idempotent);
        if (t.degree != x.min_degree()) term["differential"] = bmatrix_to_json(x.target, t.differential);
        Json acts = Json::array();
        for (const auto& m : t.left_action) acts.push_back(bmatrix_to_json(x.target, m));
        term["left_action"] = std::move(acts);
        terms.push_back(std::move(term));
    }
    j["terms"] = std::move(terms);
    return j;
}

DgBimodule load_bimodule(const std::string& path, std::optional<Field> field_override) {
    Json j = read_json_file(path);
    return bimodule_from_json(j, field_override, std::filesystem::path(path).parent_path().string());
}

}  // namespace ttcalc

#include "ttcalc/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ttcalc/errors.hpp"
#include "ttcalc/exactlin.hpp"

namespace ttcalc {

namespace {

constexpr std::size_t kMaxPathAlgebraDim = 20000;

std::string label_or_index(const Algebra& a, std::size_t i) {
    return i < a.dim() ? a.basis()[i] : std::to_string(i);
}

std::string describe(const Vector& v, const Algebra& a) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& e : v.entries()) {
        if (!first) os << " + ";
        first = false;
        if (!e.value.is_one()) os << e.value << "*";
        os << label_or_index(a, e.index);
    }
    return os.str();
}

}  // namespace

Algebra::Algebra(std::string name, Field field, std::vector<std::string> basis, Vector unit,
                 const std::vector<StructureConstant>& mult, std::vector<Vector> idempotents)
    : name_(std::move(name)),
      field_(field),
      basis_(std::move(basis)),
      unit_(std::move(unit)),
      idempotents_(std::move(idempotents)) {
    const std::size_t d = basis_.size();
    if (unit_.dim() != d) throw std::invalid_argument("unit has length " + std::to_string(unit_.dim()) +
                                                      ", expected " + std::to_string(d));
    for (const auto& u : idempotents_)
        if (u.dim() != d) throw std::invalid_argument("idempotent has wrong length");
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Triplet>> by_pair;
    for (const auto& sc : mult) {
        if (sc.i >= d || sc.j >= d || sc.l >= d)
            throw std::invalid_argument("structure constant index out of range");
        if (!(sc.coeff.field() == field_)) throw std::invalid_argument("structure constant in wrong field");
        by_pair[{sc.i, sc.j}].push_back({static_cast<std::uint32_t>(sc.l), 0, sc.coeff});
    }
    products_.assign(d * d, Vector(d));
    factorizations_.assign(d, {});
    for (auto& [key, entries] : by_pair) {
        Accumulator acc(d);
        for (const auto& t : entries) acc.add(t.row, t.value);
        Vector v = acc.take();
        for (const auto& e : v.entries()) factorizations_[e.index].push_back({key.first, key.second, e.value});
        products_[key.first * d + key.second] = std::move(v);
    }
}

Vector Algebra::multiply(const Vector& u, const Vector& v) const {
    if (u.dim() != dim() || v.dim() != dim())
        throw std::invalid_argument("multiply: vectors must have length " + std::to_string(dim()));
    Accumulator acc(dim());
    for (const auto& a : u.entries())
        for (const auto& b : v.entries()) {
            const Vector& p = product(a.index, b.index);
            if (!p.is_zero()) acc.add(a.value * b.value, p);
        }
    return acc.take();
}

SparseMatrix Algebra::left_multiplication(const Vector& u) const {
    std::vector<Vector> cols;
    cols.reserve(dim());
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(u, basis_vector(j)));
    return SparseMatrix::from_columns(dim(), std::move(cols));
}

std::vector<StructureConstant> Algebra::structure_constants() const {
    std::vector<StructureConstant> out;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            for (const auto& e : product(i, j).entries()) out.push_back({i, j, e.index, e.value});
    return out;
}

Report validate(const Algebra& a) {
    Report r;
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const Vector& ij = a.product(i, j);
            for (std::size_t l = 0; l < d; ++l) {
                Accumulator lhs(d);
                for (const auto& e : ij.entries()) lhs.add(e.value, a.product(e.index, l));
                Accumulator rhs(d);
                for (const auto& e : a.product(j, l).entries()) rhs.add(e.value, a.product(i, e.index));
                Vector x = lhs.take(), y = rhs.take();
                if (!(x == y))
                    r.fail("algebra.associativity",
                           "(" + a.basis()[i] + "*" + a.basis()[j] + ")*" + a.basis()[l] + " = " + describe(x, a) +
                               " but " + a.basis()[i] + "*(" + a.basis()[j] + "*" + a.basis()[l] +
                               ") = " + describe(y, a));
            }
        }
    for (std::size_t i = 0; i < d; ++i) {
        Vector e = a.basis_vector(i);
        Vector left = a.multiply(a.unit(), e);
        Vector right = a.multiply(e, a.unit());
        if (!(left == e)) r.fail("algebra.unit.left", "1*" + a.basis()[i] + " = " + describe(left, a));
        if (!(right == e)) r.fail("algebra.unit.right", a.basis()[i] + "*1 = " + describe(right, a));
    }
    const auto& idem = a.idempotents();
    if (!idem.empty()) {
        Vector sum(d);
        for (std::size_t s = 0; s < idem.size(); ++s) {
            sum += idem[s];
            for (std::size_t t = 0; t < idem.size(); ++t) {
                Vector p = a.multiply(idem[s], idem[t]);
                Vector expect = s == t ? idem[s] : Vector(d);
                if (!(p == expect))
                    r.fail("algebra.idempotent.product", "u" + std::to_string(s + 1) + "*u" + std::to_string(t + 1) +
                                                             " = " + describe(p, a));
            }
        }
        if (!(sum == a.unit())) r.fail("algebra.idempotent.sum", "sum != unit: sum = " + describe(sum, a));
    }
    return r;
}

Algebra ground_field(const Field& f) {
    return Algebra("ground_field", f, {"1"}, Vector::unit(1, 0, f), {{0, 0, 0, f.one()}});
}

Algebra truncated_poly(const Field& f, std::size_t n) {
    if (n == 0) throw DomainError("truncated_poly needs n >= 1");
    std::vector<std::string> basis;
    for (std::size_t k = 0; k < n; ++k)
        basis.push_back(k == 0 ? "1" : k == 1 ? "x" : "x^" + std::to_string(k));
    std::vector<StructureConstant> mult;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) mult.push_back({i, j, i + j, f.one()});
    return Algebra("truncated_poly(" + std::to_string(n) + ")", f, std::move(basis), Vector::unit(n, 0, f), mult);
}

Algebra dual_numbers(const Field& f) {
    Algebra a = truncated_poly(f, 2);
    a.set_name("dual_numbers");
    return a;
}

namespace {

std::string matrix_unit_label(std::size_t n, std::size_t i, std::size_t j) {
    if (n < 10) return "e" + std::to_string(i + 1) + std::to_string(j + 1);
    return "e" + std::to_string(i + 1) + "," + std::to_string(j + 1);
}

Algebra matrix_units(const Field& f, std::size_t n, bool upper, std::string name) {
    if (n == 0) throw DomainError(name + " needs n >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> units;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = upper ? i : 0; j < n; ++j) units.emplace_back(i, j);
    const std::size_t d = units.size();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<std::string> basis;
    for (std::size_t k = 0; k < d; ++k) {
        index[units[k]] = k;
        basis.push_back(matrix_unit_label(n, units[k].first, units[k].second));
    }
    std::vector<StructureConstant> mult;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            if (units[a].second == units[b].first)
                mult.push_back({a, b, index.at({units[a].first, units[b].second}), f.one()});
    Vector unit(d);
    std::vector<Vector> idem;
    for (std::size_t i = 0; i < n; ++i) idem.push_back(Vector::unit(d, index.at({i, i}), f));
    for (std::size_t k = 0; k < d; ++k)
        if (units[k].first == units[k].second) unit.push_back(static_cast<std::uint32_t>(k), f.one());
    return Algebra(std::move(name), f, std::move(basis), std::move(unit), mult, std::move(idem));
}

}  // namespace

Algebra matrix_algebra(const Field& f, std::size_t n) {
    return matrix_units(f, n, false, "matrix_algebra(" + std::to_string(n) + ")");
}

Algebra upper_triangular(const Field& f, std::size_t n) {
    return matrix_units(f, n, true, "upper_triangular(" + std::to_string(n) + ")");
}

Algebra product(const std::vector<Algebra>& factors) {
    if (factors.empty()) throw DomainError("product of no factors");
    const Field f = factors.front().field();
    std::size_t d = 0;
    std::vector<std::size_t> offset;
    std::string name = "product(";
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (!(factors[k].field() == f)) throw DomainError("product factors over different fields");
        offset.push_back(d);
        d += factors[k].dim();
        name += (k ? "," : "") + factors[k].name();
    }
    name += ")";
    std::vector<std::string> basis;
    std::vector<StructureConstant> mult;
    Vector unit(d);
    std::vector<Vector> idem;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const Algebra& a = factors[k];
        for (const auto& b : a.basis()) basis.push_back(b + "_" + std::to_string(k + 1));
        for (const auto& sc : a.structure_constants())
            mult.push_back({sc.i + offset[k], sc.j + offset[k], sc.l + offset[k], sc.coeff});
        Vector u = a.unit().embedded(d, offset[k]);
        unit += u;
        idem.push_back(u);
    }
    return Algebra(std::move(name), f, std::move(basis), std::move(unit), mult, std::move(idem));
}

Algebra opposite(const Algebra& a) {
    std::vector<StructureConstant> mult;
    for (const auto& sc : a.structure_constants()) mult.push_back({sc.j, sc.i, sc.l, sc.coeff});
    std::string name = a.name().rfind("opposite(", 0) == 0 && a.name().back() == ')'
                           ? a.name().substr(9, a.name().size() - 10)
                           : "opposite(" + a.name() + ")";
    return Algebra(std::move(name), a.field(), a.basis(), a.unit(), mult, a.idempotents());
}

namespace {

struct Path {
    std::size_t source;
    std::size_t target;
    std::vector<std::size_t> arrows;  // traversal order
};

bool ends_with_relation(const std::vector<std::size_t>& arrows, const Quiver& q) {
    for (const auto& rel : q.relations) {
        if (rel.empty() || rel.size() > arrows.size()) continue;
        if (std::equal(rel.begin(), rel.end(), arrows.end() - static_cast<std::ptrdiff_t>(rel.size()))) return true;
    }
    return false;
}

void check_quiver(const Quiver& q) {
    if (q.vertices == 0) throw DomainError("quiver has no vertices");
    for (const auto& ar : q.arrows)
        if (ar.source >= q.vertices || ar.target >= q.vertices)
            throw DomainError("arrow '" + ar.label + "' has an endpoint out of range");
    for (const auto& rel : q.relations) {
        if (rel.empty()) throw DomainError("empty relation");
        for (std::size_t k = 0; k < rel.size(); ++k) {
            if (rel[k] >= q.arrows.size()) throw DomainError("relation uses an unknown arrow");
            if (k > 0 && q.arrows[rel[k - 1]].target != q.arrows[rel[k]].source)
                throw DomainError("relation path is not composable");
        }
    }
}

}  // namespace

Algebra path_algebra(const Field& f, const Quiver& q, std::string name) {
    check_quiver(q);
    std::size_t max_rel = 0;
    for (const auto& rel : q.relations) max_rel = std::max(max_rel, rel.size());
    const std::size_t window = max_rel > 0 ? max_rel - 1 : 0;

    std::vector<std::vector<Path>> by_length;
    std::vector<Path> level;
    for (std::size_t v = 0; v < q.vertices; ++v) level.push_back({v, v, {}});
    std::size_t total = 0;
    std::size_t states = 0;
    for (std::size_t len = 0; !level.empty(); ++len) {
        std::sort(level.begin(), level.end(), [](const Path& x, const Path& y) {
            return x.arrows != y.arrows ? x.arrows < y.arrows : x.source < y.source;
        });
        if (len == window) states = level.size();
        if (len >= window && len >= window + states && states > 0)
            throw DomainError("path algebra of '" + name + "' is infinite-dimensional: an oriented cycle "
                              "is not killed by any relation");
        total += level.size();
        if (total > kMaxPathAlgebraDim) throw ResourceLimitError("path algebra dimension exceeds limit");
        std::vector<Path> next;
        for (const auto& p : level)
            for (std::size_t k = 0; k < q.arrows.size(); ++k) {
                if (q.arrows[k].source != p.target) continue;
                Path ext{p.source, q.arrows[k].target, p.arrows};
                ext.arrows.push_back(k);
                if (!ends_with_relation(ext.arrows, q)) next.push_back(std::move(ext));
            }
        by_length.push_back(std::move(level));
        level = std::move(next);
    }

    std::vector<Path> paths;
    for (auto& lvl : by_length)
        for (auto& p : lvl) paths.push_back(std::move(p));
    const std::size_t d = paths.size();
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> index;
    std::vector<std::string> basis;
    for (std::size_t k = 0; k < d; ++k) {
        index[{paths[k].source, paths[k].arrows}] = k;
        if (paths[k].arrows.empty()) {
            basis.push_back("e" + std::to_string(paths[k].source + 1));
        } else {
            std::string label;
            for (auto it = paths[k].arrows.rbegin(); it != paths[k].arrows.rend(); ++it) label += q.arrows[*it].label;
            basis.push_back(label);
        }
    }
    std::vector<StructureConstant> mult;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            // e_a * e_b = "b then a"
            if (paths[b].target != paths[a].source) continue;
            std::vector<std::size_t> seq = paths[b].arrows;
            seq.insert(seq.end(), paths[a].arrows.begin(), paths[a].arrows.end());
            auto it = index.find({paths[b].source, seq});
            if (it != index.end()) mult.push_back({a, b, it->second, f.one()});
        }
    Vector unit(d);
    std::vector<Vector> idem;
    for (std::size_t v = 0; v < q.vertices; ++v) {
        unit.push_back(static_cast<std::uint32_t>(v), f.one());
        idem.push_back(Vector::unit(d, v, f));
    }
    return Algebra(std::move(name), f, std::move(basis), std::move(unit), mult, std::move(idem));
}

Algebra a3_linear(const Field& f) {
    Quiver q{3, {{0, 1, "a"}, {1, 2, "b"}}, {}};
    return path_algebra(f, q, "a3_linear");
}

Algebra a3_sink(const Field& f) {
    Quiver q{3, {{0, 1, "u"}, {2, 1, "v"}}, {}};
    return path_algebra(f, q, "a3_sink");
}

namespace {

struct FamilyCall {
    std::string head;
    std::vector<std::string> args;
};

FamilyCall split_call(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    FamilyCall call;
    const auto open = text.find('(');
    if (open == std::string_view::npos) {
        call.head = std::string(text);
        return call;
    }
    if (text.back() != ')') throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
    call.head = std::string(trim(text.substr(0, open)));
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= inner.size(); ++k) {
        if (k == inner.size() || (inner[k] == ',' && depth == 0)) {
            auto arg = trim(inner.substr(start, k - start));
            if (arg.empty()) throw ParseError("empty argument in '" + std::string(text) + "'");
            call.args.emplace_back(arg);
            start = k + 1;
        } else if (inner[k] == '(') {
            ++depth;
        } else if (inner[k] == ')') {
            if (--depth < 0) throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
        }
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
    return call;
}

std::size_t size_argument(const FamilyCall& call) {
    if (call.args.size() != 1) throw ParseError(call.head + " takes one integer argument");
    const std::string& s = call.args[0];
    if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("bad integer argument '" + s + "' for " + call.head);
    return static_cast<std::size_t>(std::stoul(s));
}

}  // namespace

Algebra build(std::string_view family, const Field& f) {
    FamilyCall call = split_call(family);
    const auto& h = call.head;
    auto no_args = [&] {
        if (!call.args.empty()) throw ParseError(h + " takes no arguments");
    };
    if (h == "ground_field") return no_args(), ground_field(f);
    if (h == "dual_numbers") return no_args(), dual_numbers(f);
    if (h == "a3_linear") return no_args(), a3_linear(f);
    if (h == "a3_sink") return no_args(), a3_sink(f);
    if (h == "k_times_k") {
        no_args();
        Algebra a = product({ground_field(f), ground_field(f)});
        a.set_name("k_times_k");
        return a;
    }
    if (h == "truncated_poly") return truncated_poly(f, size_argument(call));
    if (h == "matrix_algebra") return matrix_algebra(f, size_argument(call));
    if (h == "upper_triangular") return upper_triangular(f, size_argument(call));
    if (h == "product") {
        if (call.args.empty()) throw ParseError("product needs at least one factor");
        std::vector<Algebra> factors;
        for (const auto& arg : call.args) factors.push_back(build(arg, f));
        return product(factors);
    }
    if (h == "opposite") {
        if (call.args.size() != 1) throw ParseError("opposite takes one argument");
        return opposite(build(call.args[0], f));
    }
    throw ParseError("unknown algebra family '" + h + "'");
}

UnitFirstBasis rebase_unit_first(const Algebra& a) {
    const std::size_t d = a.dim();
    const Field& f = a.field();
    if (a.unit().is_zero()) throw DomainError("algebra unit is zero");
    const std::size_t pivot = a.unit().leading_index();
    std::vector<Vector> old_cols;
    std::vector<std::string> labels;
    old_cols.push_back(a.unit());
    labels.push_back("1");
    for (std::size_t k = 0; k < d; ++k) {
        if (k == pivot) continue;
        old_cols.push_back(Vector::unit(d, k, f));
        labels.push_back(a.basis()[k]);
    }
    SparseMatrix to_old = SparseMatrix::from_columns(d, old_cols);
    auto inv = inverse(to_old);
    if (!inv) throw InvariantError("unit-first basis change is singular");
    SparseMatrix to_new = *inv;
    std::vector<StructureConstant> mult;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Vector p = to_new.apply(a.multiply(old_cols[i], old_cols[j]));
            for (const auto& e : p.entries()) mult.push_back({i, j, e.index, e.value});
        }
    std::vector<Vector> idem;
    for (const auto& u : a.idempotents()) idem.push_back(to_new.apply(u));
    Algebra b(a.name(), f, std::move(labels), Vector::unit(d, 0, f), mult, std::move(idem));
    return {std::move(b), std::move(to_new), std::move(to_old)};
}

bool same_structure(const Algebra& a, const Algebra& b) {
    if (!(a.field() == b.field()) || a.dim() != b.dim() || !(a.unit() == b.unit())) return false;
    for (std::size_t i = 0; i < a.dim() * a.dim(); ++i)
        if (!(a.product(i / a.dim(), i % a.dim()) == b.product(i / a.dim(), i % a.dim()))) return false;
    return true;
}

}  // namespace ttcalc

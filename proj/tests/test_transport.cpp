#include <catch2/catch_amalgamated.hpp>

#include "ttcalc/calculus.hpp"
#include "ttcalc/errors.hpp"
#include "ttcalc/transport.hpp"

using namespace ttcalc;

namespace {

const Field Q = Field::rationals();

const std::vector<TraceSign> kSchemes{TraceSign::none, TraceSign::degree, TraceSign::degree_times_n,
                                      TraceSign::degree_plus_degree_times_n};

SparseMatrix morphism(const Algebra& a, const Algebra& b, const std::vector<std::string>& images) {
    std::vector<Vector> cols;
    for (const auto& s : images) cols.push_back(parse_element(b, s));
    return SparseMatrix::from_columns(b.dim(), std::move(cols));
}

/// A in degree 0 and 1 with d = id.
DgBimodule cone_of_identity(const Algebra& a) {
    DgBimodule c{a, a, {regular_bimodule(a, 0).terms[0], regular_bimodule(a, 1).terms[0]}};
    c.terms[1].differential = BMatrix::identity(a, 1);
    return c;
}

std::vector<SparseMatrix> hh_of_trace(const DgBimodule& x, int D, TraceSign s = kTraceSign) {
    return induced_on_hh(x.source, x.target, [&](int n) { return trace_map(x, n, s); }, D);
}

bool all_identity(const std::vector<SparseMatrix>& maps, const Scalar& c, const Field& f = Q) {
    for (const auto& m : maps)
        if (!(m == c * SparseMatrix::identity(m.rows(), f))) return false;
    return true;
}

void require_clean(const Report& r) {
    for (const auto& c : r.failures()) FAIL_CHECK(c.id << ": " << c.detail);
    CHECK(r.ok());
}

bool is_chain_map(const DgBimodule& x, int D, TraceSign s) {
    HochschildComplex ca(x.source, false), cb(x.target, false);
    SparseMatrix prev = trace_map(x, 0, s);
    for (int n = 1; n <= D; ++n) {
        SparseMatrix cur = trace_map(x, n, s);
        if (!(cb.b(n) * cur == prev * ca.b(n))) return false;
        if (!(cb.bprime(n) * cur == prev * ca.bprime(n))) return false;
        prev = std::move(cur);
    }
    return true;
}

}  // namespace

TEST_CASE("algebra elements parse from labels") {
    Algebra a = a3_linear(Q);
    CHECK(parse_element(a, "ba") == a.basis_vector(5));
    CHECK(parse_element(a, "2*ba - e1") == Q.from_int(2) * a.basis_vector(5) - a.basis_vector(0));
    CHECK(parse_element(a, "0").is_zero());
    CHECK(parse_element(a, "1") == a.unit());
    CHECK(parse_element(truncated_poly(Q, 3), "1/2*x^2") == Q.parse("1/2") * truncated_poly(Q, 3).basis_vector(2));
    CHECK_THROWS_AS(parse_element(a, "3*c"), ParseError);
    CHECK_THROWS_AS(parse_element(a, ""), ParseError);
    CHECK_THROWS_AS(parse_element(a, "e1 +"), ParseError);
}

TEST_CASE("bundled fixtures are valid derived equivalences") {
    for (const char* path : {"data/a3_tilting.json", "data/morita_k_m2.json", "data/morita_m2_k.json"}) {
        INFO(path);
        DgBimodule x = load_bimodule(path);
        require_clean(validate_bimodule(x));
        require_clean(validate_derived_equivalence(x));
    }
    DgBimodule x = load_bimodule("data/a3_tilting.json");
    Report r = validate_bimodule(x);
    for (const char* id : {"bimodule.idempotent.p0", "bimodule.dual_basis.p1", "bimodule.presentation.p1",
                           "bimodule.chain.p1", "bimodule.action.p0", "bimodule.unit.p1", "bimodule.stable.p1"})
        CHECK(r.find(id));

    // End(e_1(k x k)) = k although e_1(k x k) does not generate
    DgBimodule y = load_bimodule("data/morphism_k_kxk.json");
    require_clean(validate_bimodule(y));
    require_clean(validate_derived_equivalence(y));

    DgBimodule m = load_bimodule("data/morphism_k_m2.json");
    require_clean(validate_bimodule(m));
    CHECK(end_complex(m).homology[0].dim() == 4);
}

TEST_CASE("bimodule documents round-trip") {
    DgBimodule x = load_bimodule("data/a3_tilting.json");
    DgBimodule y = bimodule_from_json(bimodule_to_json(x));
    CHECK(bimodule_to_json(y).dump() == bimodule_to_json(x).dump());
    REQUIRE(y.terms.size() == 2);
    CHECK(y.terms[1].differential == x.terms[1].differential);

    DgBimodule over_f3 = load_bimodule("data/a3_tilting.json", Field::prime(3));
    CHECK(over_f3.target.field() == Field::prime(3));
    require_clean(validate_derived_equivalence(over_f3));
}

TEST_CASE("malformed bimodule documents are rejected") {
    Json good = read_json_file("data/morita_k_m2.json");
    auto broken = [&](auto edit) {
        Json j = good;
        edit(j);
        return j;
    };
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["extra"] = 1; })), ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j.erase("target"); })), ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["degrees"] = Json::array({0, 1}); })), ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["terms"][0]["rank"] = 2; })), ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["terms"][0]["idempotent"][0][0] = "e33"; })),
                    ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["terms"][0]["left_action"] = Json::array(); })),
                    ParseError);
    CHECK_THROWS_AS(bimodule_from_json(broken([](Json& j) { j["source"] = "no_such_algebra"; })), ParseError);
}

TEST_CASE("axiom violations are witnessed") {
    DgBimodule x = load_bimodule("data/a3_tilting.json");

    DgBimodule d2 = x;
    DgBimodule three{x.source, x.target, {x.terms[0], x.terms[1], x.terms[1]}};
    three.terms[2].degree = 2;
    three.terms[2].differential = BMatrix::identity(x.target, 2);
    Report r = validate_bimodule(three);
    const Check* c = r.find("bimodule.d2.p2");
    REQUIRE(c);
    CHECK(!c->passed);
    CHECK(c->detail.find("d^2 != 0") != std::string::npos);

    d2.terms[1].left_action[3].at(1, 0) = Vector(x.target.dim());
    Report chain = validate_bimodule(d2);
    CHECK(!chain.find("bimodule.chain.p1")->passed);

    DgBimodule bad_e = x;
    bad_e.terms[0].idempotent.at(0, 0) = Q.from_int(2) * x.target.basis_vector(1);
    Report e = validate_bimodule(bad_e);
    CHECK(!e.find("bimodule.idempotent.p0")->passed);
    CHECK(!e.find("bimodule.dual_basis.p0")->passed);
}

TEST_CASE("bimodules from algebra morphisms") {
    Algebra k = ground_field(Q), kk = build("k_times_k", Q), m2 = matrix_algebra(Q, 2);
    DgBimodule id = bimodule_from_morphism(m2, m2, SparseMatrix::identity(4, Q));
    DgBimodule reg = regular_bimodule(m2);
    CHECK(bimodule_to_json(id).dump() == bimodule_to_json(reg).dump());

    DgBimodule e1 = bimodule_from_morphism(k, kk, morphism(k, kk, {"1_1"}));
    CHECK(e1.terms[0].idempotent.at(0, 0) == kk.basis_vector(0));
    CHECK(bimodule_to_json(e1).dump() == bimodule_to_json(load_bimodule("data/morphism_k_kxk.json")).dump());
    CHECK(bimodule_to_json(bimodule_from_morphism(k, m2, morphism(k, m2, {"e11 + e22"}))).dump() ==
          bimodule_to_json(load_bimodule("data/morphism_k_m2.json")).dump());

    CHECK_THROWS_AS(bimodule_from_morphism(k, kk, morphism(k, kk, {"2*1_1"})), DomainError);
    Algebra d = dual_numbers(Q);
    CHECK_THROWS_AS(bimodule_from_morphism(d, d, morphism(d, d, {"1", "1"})), DomainError);
}

TEST_CASE("end complexes") {
    Algebra d = dual_numbers(Q);
    EndComplex reg = end_complex(regular_bimodule(d));
    CHECK(reg.min_degree == 0);
    CHECK(reg.homology[0].dim() == 2);
    CHECK(reg.alpha == SparseMatrix::identity(2, Q));

    EndComplex row = end_complex(load_bimodule("data/morita_k_m2.json"));
    CHECK(row.homology[0].dim() == 1);

    DgBimodule with_cone = direct_sum(regular_bimodule(d), cone_of_identity(d));
    require_clean(validate_bimodule(with_cone));
    EndComplex e = end_complex(with_cone);
    CHECK(e.min_degree == -1);
    CHECK(e.homology[e.index(-1)].dim() == 0);
    CHECK(e.homology[e.index(0)].dim() == 2);
    CHECK(e.homology[e.index(1)].dim() == 0);
    require_clean(validate_derived_equivalence(with_cone));

    EndComplex t = end_complex(load_bimodule("data/a3_tilting.json"));
    CHECK(t.homology[t.index(0)].dim() == 5);
    CHECK(t.homology[t.index(1)].dim() == 0);
    CHECK(t.homology[t.index(-1)].dim() == 0);

    // the cone of id alone has End quasi-isomorphic to 0
    Report zero = validate_derived_equivalence(cone_of_identity(d));
    CHECK(!zero.find("equiv.H0.iso")->passed);
}

TEST_CASE("composition of bimodules") {
    Algebra k = ground_field(Q), kk = build("k_times_k", Q), m2 = matrix_algebra(Q, 2);
    DgBimodule x = load_bimodule("data/a3_tilting.json");
    for (const DgBimodule& c : {compose(regular_bimodule(x.source), x), compose(x, regular_bimodule(x.target))}) {
        require_clean(validate_bimodule(c));
        REQUIRE(c.terms.size() == x.terms.size());
        for (std::size_t p = 0; p < c.terms.size(); ++p) CHECK(c.terms[p].rank == x.terms[p].rank);
        for (int n = 0; n <= 2; ++n) CHECK(trace_map(c, n) == trace_map(x, n));
    }

    SparseMatrix f = morphism(k, kk, {"1_1 + 1_2"});
    SparseMatrix g = morphism(kk, m2, {"e11", "e22"});
    DgBimodule fg = compose(bimodule_from_morphism(k, kk, f), bimodule_from_morphism(kk, m2, g));
    DgBimodule gf = bimodule_from_morphism(k, m2, g * f);
    CHECK(bimodule_to_json(fg).dump() == bimodule_to_json(gf).dump());

    DgBimodule there = load_bimodule("data/morita_k_m2.json"), back = load_bimodule("data/morita_m2_k.json");
    DgBimodule loop = compose(there, back);
    require_clean(validate_derived_equivalence(loop));
    CHECK(loop.terms[0].rank == 2);

    CHECK_THROWS_AS(compose(there, there), std::invalid_argument);
}

TEST_CASE("trace examples") {
    for (const Algebra& a : {dual_numbers(Q), a3_linear(Q), matrix_algebra(Q, 2)})
        for (int n = 0; n <= 2; ++n) {
            SparseMatrix tr = trace_map(regular_bimodule(a), n);
            CHECK(tr == SparseMatrix::identity(tr.rows(), Q));
        }
    Algebra k = ground_field(Q);
    SparseMatrix e1 = trace_map(load_bimodule("data/morphism_k_kxk.json"), 0);
    CHECK(e1.column(0) == build("k_times_k", Q).basis_vector(0));
    DgBimodule row = load_bimodule("data/morita_k_m2.json");
    SparseMatrix e11 = trace_map(row, 0);
    CHECK(e11.column(0) == matrix_algebra(Q, 2).basis_vector(0));
    auto hh = hh_of_trace(row, 2);
    CHECK(hh[0].rows() == 1);
    // [e11] = 1/2 [e11 + e22], and the matrix trace of e11 + e22 is 2
    CHECK(hh[0] == Q.parse("1/2") * SparseMatrix::identity(1, Q));

    // the M_2-k direction sums the diagonal
    SparseMatrix tr = trace_map(load_bimodule("data/morita_m2_k.json"), 0);
    CHECK(tr.column(0) == k.unit());
    CHECK(tr.column(1).is_zero());
    CHECK(tr.column(3) == k.unit());

    CHECK_THROWS_AS(trace_map(row, 6, kTraceSign, Limits{100}), ResourceLimitError);
}

TEST_CASE("sign scheme selection", "[property]") {
    DgBimodule tilting = load_bimodule("data/a3_tilting.json");
    std::vector<TraceSign> survivors;
    for (TraceSign s : kSchemes) {
        INFO(to_string(s));
        bool chain = is_chain_map(tilting, 3, s);
        bool contractible = true;
        for (const Algebra& a : {dual_numbers(Q), upper_triangular(Q, 2)}) {
            DgBimodule x = direct_sum(regular_bimodule(a), cone_of_identity(a));
            contractible = contractible && is_chain_map(x, 3, s) && all_identity(hh_of_trace(x, 3, s), Q.one());
        }
        if (chain && contractible) survivors.push_back(s);
    }
    REQUIRE(survivors.size() == 1);
    CHECK(survivors[0] == kTraceSign);
    CHECK(kTraceSign == TraceSign::degree);

    // the scheme without signs is a chain map but counts the contractible summand
    Algebra d = dual_numbers(Q);
    DgBimodule x = direct_sum(regular_bimodule(d), cone_of_identity(d));
    CHECK(is_chain_map(x, 3, TraceSign::none));
    CHECK(all_identity(hh_of_trace(x, 3, TraceSign::none), Q.from_int(3)));
}

TEST_CASE("trace of a shifted regular bimodule") {
    for (const Algebra& a : {dual_numbers(Q), a3_linear(Q), upper_triangular(Q, 2)}) {
        INFO(a.name());
        DgBimodule shifted = regular_bimodule(a, 1);
        require_clean(validate_derived_equivalence(shifted));
        CHECK(all_identity(hh_of_trace(shifted, 3), -Q.one()));
        CHECK(all_identity(hh_of_trace(shifted, 3, TraceSign::none), Q.one()));
        CHECK(all_identity(hh_of_trace(regular_bimodule(a, 2), 3), Q.one()));
    }
    // over F_2 the sign is invisible
    Algebra d2 = dual_numbers(Field::prime(2));
    CHECK(all_identity(hh_of_trace(regular_bimodule(d2, 1), 3), Field::prime(2).one(), Field::prime(2)));
}

TEST_CASE("normalization: traces of morphism bimodules", "[property]") {
    Algebra k = ground_field(Q), kk = build("k_times_k", Q), m2 = matrix_algebra(Q, 2), d = dual_numbers(Q);
    struct Case {
        Algebra a, b;
        SparseMatrix f;
    };
    std::vector<Case> cases{
        {d, d, SparseMatrix::identity(2, Q)},
        {k, kk, morphism(k, kk, {"1_1"})},
        {k, m2, morphism(k, m2, {"e11 + e22"})},
        {kk, m2, morphism(kk, m2, {"e11", "0"})},
        {d, m2, morphism(d, m2, {"e11 + e22", "e12"})},
        {k, d, morphism(k, d, {"1"})},
    };
    for (const Case& c : cases) {
        INFO(c.a.name() << " -> " << c.b.name());
        DgBimodule x = bimodule_from_morphism(c.a, c.b, c.f);
        require_clean(validate_bimodule(x));
        for (int n = 0; n <= 2; ++n) {
            SparseMatrix tr = trace_map(x, n);
            SparseMatrix tp = tensor_power_map(c.a, c.b, c.f, n);
            CHECK(tr.rows() == tp.rows());
        }
        auto lhs = hh_of_trace(x, 3);
        auto rhs = induced_on_hh(c.a, c.b, [&](int n) { return tensor_power_map(c.a, c.b, c.f, n); }, 3);
        for (int n = 0; n <= 3; ++n) CHECK(lhs[n] == rhs[n]);
    }
}

TEST_CASE("functoriality of the trace on homology", "[property]") {
    Algebra k = ground_field(Q), kk = build("k_times_k", Q), m2 = matrix_algebra(Q, 2);
    std::vector<std::pair<DgBimodule, DgBimodule>> pairs{
        {load_bimodule("data/morita_k_m2.json"), load_bimodule("data/morita_m2_k.json")},
        {load_bimodule("data/morita_m2_k.json"), load_bimodule("data/morita_k_m2.json")},
        {bimodule_from_morphism(k, kk, morphism(k, kk, {"1_1"})),
         bimodule_from_morphism(kk, m2, morphism(kk, m2, {"e11", "e22"}))},
        {load_bimodule("data/a3_tilting.json"), regular_bimodule(a3_linear(Q), 1)},
        {regular_bimodule(a3_sink(Q), 1), load_bimodule("data/a3_tilting.json")},
    };
    for (const auto& [x, y] : pairs) {
        INFO(x.source.name() << " -> " << x.target.name() << " -> " << y.target.name());
        DgBimodule z = compose(x, y);
        require_clean(validate_bimodule(z));
        auto hx = hh_of_trace(x, 3), hy = hh_of_trace(y, 3), hz = hh_of_trace(z, 3);
        for (int n = 0; n <= 3; ++n) CHECK(hz[n] == hy[n] * hx[n]);
    }
}

TEST_CASE("derived invariance of the ladder") {
    for (const char* path : {"data/morita_k_m2.json", "data/morita_m2_k.json", "data/a3_tilting.json"}) {
        INFO(path);
        Report r = transport_report(load_bimodule(path), 3);
        require_clean(r);
        for (const char* id : {"trace.b.n3", "trace.t.n0", "trace.bprime.n2", "ladder.hh_iso.n3", "ladder.B.n2",
                               "ladder.I.n3", "ladder.S.n3", "ladder.Bprime.n2", "ladder.hc_iso.n3"})
            CHECK(r.find(id));
        const Check* chain_b = r.find("ladder.chain_B");
        REQUIRE(chain_b);
        CHECK(!chain_b->required);
    }
    Algebra d = dual_numbers(Q);
    Report reg = transport_report(regular_bimodule(d), 3);
    require_clean(reg);

    Report wrong = transport_report(load_bimodule("data/a3_tilting.json"), 3, TraceSign::degree_times_n);
    CHECK(!wrong.ok());
    CHECK(wrong.find("ladder.skipped"));

    Report not_equiv = transport_report(cone_of_identity(d), 2);
    CHECK(!not_equiv.ok());
}

TEST_CASE("implicit cohomology transport") {
    Algebra d = dual_numbers(Q);
    CohomologyTransport reg = transport_cohomology_solve(regular_bimodule(d), 3);
    REQUIRE(reg.unique);
    for (const auto& t : reg.T) CHECK(t == SparseMatrix::identity(t.rows(), Q));
    require_clean(reg.report);

    CohomologyTransport morita = transport_cohomology_solve(load_bimodule("data/morita_k_m2.json"), 3);
    REQUIRE(morita.unique);
    CHECK(morita.T[0] == SparseMatrix::identity(1, Q));
    require_clean(morita.report);
    CHECK(morita.report.find("cohomology.unit"));
    CHECK(morita.report.find("cohomology.cup.m0.n0"));

    CohomologyTransport tilt = transport_cohomology_solve(load_bimodule("data/a3_tilting.json"), 3);
    REQUIRE(tilt.unique);
    CHECK(tilt.T[0] == SparseMatrix::identity(1, Q));
    for (int m = 1; m <= 3; ++m) CHECK(tilt.T[m].rows() == 0);
    require_clean(tilt.report);
}

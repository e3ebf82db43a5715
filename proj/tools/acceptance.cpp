#include <sys/resource.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "ttcalc/calculus.hpp"
#include "ttcalc/cyclic.hpp"
#include "ttcalc/errors.hpp"
#include "ttcalc/transport.hpp"

using namespace ttcalc;

namespace {

const Field Q = Field::rationals();

/// Collects the first few failures of one criterion.
class Tally {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 3) failures_.push_back(what);
        failed_ += !ok;
    }
    void expect(const Report& r, const std::string& context) {
        for (const auto& c : r.checks()) {
            if (!c.required) continue;
            expect(c.passed, context + ": " + c.id + (c.detail.empty() ? "" : " (" + c.detail + ")"));
        }
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream os;
        os << checks_ - failed_ << "/" << checks_ << " checks";
        for (const auto& f : failures_) os << "; " << f;
        return os.str();
    }

private:
    std::size_t checks_ = 0, failed_ = 0;
    std::vector<std::string> failures_;
};

std::vector<Algebra> bundled() {
    return {ground_field(Q),       dual_numbers(Q),      truncated_poly(Q, 3), build("k_times_k", Q),
            upper_triangular(Q, 2), matrix_algebra(Q, 2), a3_linear(Q),         a3_sink(Q)};
}

std::vector<std::size_t> dims(const std::vector<HomologySpace>& h) {
    std::vector<std::size_t> out;
    for (const auto& s : h) out.push_back(s.dim());
    return out;
}

std::string text(const std::vector<std::size_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Tally structural() {
    Tally t;
    const auto t0 = std::chrono::steady_clock::now();
    const int top = 5;
    for (const Algebra& a : {ground_field(Q), dual_numbers(Q), build("k_times_k", Q), upper_triangular(Q, 2),
                             a3_linear(Q), a3_sink(Q), matrix_algebra(Q, 2)}) {
        const std::string name = a.name();
        HochschildComplex c(a, false), nc(a, true);
        for (int n = 0; n <= top; ++n) {
            const std::string at = name + " n=" + std::to_string(n);
            const SparseMatrix id = SparseMatrix::identity(c.chain_dim(n), Q);
            SparseMatrix power = c.t(n);
            for (int k = 1; k <= n; ++k) power = c.t(n) * power;
            t.expect(power == id, "t^{n+1} = 1 on " + at);
            if (n >= 1) {
                const SparseMatrix idl = SparseMatrix::identity(c.chain_dim(n - 1), Q);
                t.expect(((idl - c.t(n - 1)) * c.bprime(n) - c.b(n) * (id - c.t(n))).is_zero(), "(1-t)b' = b(1-t) on " + at);
                t.expect((c.N(n - 1) * c.b(n) - c.bprime(n) * c.N(n)).is_zero(), "Nb = b'N on " + at);
            }
            if (n >= 2) {
                t.expect((c.b(n - 1) * c.b(n)).is_zero(), "b^2 = 0 on " + at);
                t.expect((c.bprime(n - 1) * c.bprime(n)).is_zero(), "b'^2 = 0 on " + at);
                t.expect((nc.b(n - 1) * nc.b(n)).is_zero(), "normalized b^2 = 0 on " + at);
            }
            if (n + 1 <= top) {
                t.expect((c.delta(n + 1) * c.delta(n)).is_zero(), "delta^2 = 0 on " + at);
                t.expect((nc.connes_B(n + 1) * nc.connes_B(n)).is_zero(), "B^2 = 0 on " + at);
                SparseMatrix bB = nc.b(n + 1) * nc.connes_B(n);
                if (n >= 1) bB += nc.connes_B(n - 1) * nc.b(n);
                t.expect(bB.is_zero(), "bB + Bb = 0 on " + at);
            }
        }
        t.expect(check_mixed(cone_mixed_complex(a, top - 1), "cone"), name);
        t.expect(check_mixed(normalized_mixed_complex(a, top - 1), "norm"), name);
    }
    const double s = seconds_since(t0);
    t.expect(s < 60, "runtime " + std::to_string(s) + " s >= 60 s");
    return t;
}

Tally oracle_dimensions() {
    Tally t;
    // frozen from tests/oracle/hh_oracle.py
    const std::vector<std::pair<std::string, std::vector<std::size_t>>> table{
        {"dual_numbers", {2, 1, 1, 1, 1}}, {"k_times_k", {2, 0, 0, 0}}, {"upper_triangular(2)", {2, 0, 0, 0}},
        {"a3_linear", {3, 0, 0, 0}},       {"a3_sink", {3, 0, 0, 0}},
    };
    for (const auto& [family, expected] : table) {
        Algebra a = build(family, Q);
        const int D = static_cast<int>(expected.size()) - 1;
        for (bool normalized : {false, true}) {
            auto got = dims(hochschild_homology(HochschildComplex(a, normalized), D));
            t.expect(got == expected, family + (normalized ? " normalized " : " ") + text(got) + " != " + text(expected));
        }
    }
    for (const Algebra& a : bundled()) {
        auto un = dims(hochschild_homology(HochschildComplex(a, false), 4));
        auto no = dims(hochschild_homology(HochschildComplex(a, true), 4));
        t.expect(un == no, a.name() + " normalized " + text(no) + " != unnormalized " + text(un));
    }
    return t;
}

Tally cyclic() {
    Tally t;
    const std::vector<std::size_t> k{1, 0, 1, 0, 1};
    for (const auto& m : {cone_mixed_complex(ground_field(Q), 4), normalized_mixed_complex(ground_field(Q), 4)}) {
        auto got = dims(cyclic_homology(m, 4));
        t.expect(got == k, "HC(k) " + m.model + " model " + text(got));
    }
    for (const Algebra& a : bundled()) {
        auto cone = dims(cyclic_homology(cone_mixed_complex(a, 4), 4));
        auto norm = dims(cyclic_homology(normalized_mixed_complex(a, 4), 4));
        auto hh = dims(hochschild_homology(HochschildComplex(a, true), 0));
        t.expect(cone == norm, a.name() + " cone " + text(cone) + " != normalized " + text(norm));
        t.expect(norm[0] == hh[0], a.name() + " HC_0 != HH_0");
    }
    return t;
}

Tally sbi() {
    Tally t;
    for (const Algebra& a : bundled()) t.expect(verify_sbi(a, 3), a.name());
    return t;
}

std::set<std::string> failing_ids(const Report& r) {
    std::set<std::string> out;
    for (const auto& c : r.failures()) out.insert(c.id);
    return out;
}

Tally calculus() {
    Tally t;
    for (const Algebra& a : bundled()) t.expect(verify_calculus(a, 3), a.name());

    Algebra d = dual_numbers(Q);
    const auto clean = failing_ids(verify_calculus(d, 3));
    Report flipped = verify_calculus(d, 3, {BMutation::Kind::shifted_sign, 1});
    bool witnessed = false;
    for (const auto& c : flipped.failures()) witnessed = witnessed || (!clean.count(c.id) && !c.detail.empty());
    t.expect(witnessed, "flipped sign in B produced no new failing identity");

    Algebra cubic = truncated_poly(Q, 3);
    auto sc = cubic.structure_constants();
    sc.push_back({1, 2, 1, Q.one()});
    Algebra broken("broken", Q, cubic.basis(), cubic.unit(), sc);
    Report corrupted;
    try {
        corrupted = verify_calculus(broken, 3);
    } catch (const std::exception& e) {
        corrupted.fail("exception", e.what());
    }
    const Check* assoc = corrupted.find("algebra.associativity");
    t.expect(assoc && !assoc->passed && !assoc->detail.empty(), "corrupted structure constant not witnessed");
    return t;
}

Tally invariance() {
    Tally t;
    for (const char* path : {"data/morita_k_m2.json", "data/morita_m2_k.json", "data/a3_tilting.json"}) {
        DgBimodule x = load_bimodule(path);
        Report r = transport_report(x, 3);
        t.expect(r, path);
        for (const char* id : {"ladder.hh_iso.n3", "ladder.B.n2", "ladder.I.n3", "ladder.S.n3", "ladder.Bprime.n2"})
            t.expect(r.find(id) != nullptr, std::string(path) + ": " + id + " missing");
        CohomologyTransport ct = transport_cohomology_solve(x, 3);
        t.expect(ct.report, path);
        if (ct.unique) t.expect(ct.report.find("cohomology.unit") != nullptr, std::string(path) + ": T(1) unchecked");
        std::ostringstream out, err;
        const int code = run_cli({"transport", path, "-D", "3"}, out, err);
        t.expect(code == kExitOk, std::string("ttcalc transport ") + path + " exited " + std::to_string(code));
    }
    return t;
}

SparseMatrix morphism(const Algebra& b, const std::vector<std::string>& images) {
    std::vector<Vector> cols;
    for (const auto& s : images) cols.push_back(parse_element(b, s));
    return SparseMatrix::from_columns(b.dim(), std::move(cols));
}

std::vector<SparseMatrix> hh_of_trace(const DgBimodule& x, int D) {
    return induced_on_hh(x.source, x.target, [&](int n) { return trace_map(x, n); }, D);
}

Tally functoriality() {
    Tally t;
    const int D = 3;
    Algebra k = ground_field(Q), kk = build("k_times_k", Q), m2 = matrix_algebra(Q, 2);
    std::vector<std::pair<DgBimodule, DgBimodule>> pairs{
        {load_bimodule("data/morita_k_m2.json"), load_bimodule("data/morita_m2_k.json")},
        {load_bimodule("data/morita_m2_k.json"), load_bimodule("data/morita_k_m2.json")},
        {bimodule_from_morphism(k, kk, morphism(kk, {"1_1"})), bimodule_from_morphism(kk, m2, morphism(m2, {"e11", "e22"}))},
        {load_bimodule("data/a3_tilting.json"), regular_bimodule(a3_linear(Q))},
    };
    for (const auto& [x, y] : pairs) {
        auto hx = hh_of_trace(x, D), hy = hh_of_trace(y, D), hz = hh_of_trace(compose(x, y), D);
        for (int n = 0; n <= D; ++n)
            t.expect(hz[n] == hy[n] * hx[n], "HH_" + std::to_string(n) + "(Tr) not functorial on " + x.source.name() +
                                                 " -> " + x.target.name() + " -> " + y.target.name());
    }
    struct Case {
        Algebra a, b;
        SparseMatrix f;
    };
    for (const Case& c : {Case{dual_numbers(Q), dual_numbers(Q), SparseMatrix::identity(2, Q)},
                          Case{a3_linear(Q), a3_linear(Q), SparseMatrix::identity(6, Q)},
                          Case{k, kk, morphism(kk, {"1_1"})}, Case{k, m2, morphism(m2, {"e11 + e22"})}}) {
        auto tr = hh_of_trace(bimodule_from_morphism(c.a, c.b, c.f), D);
        auto fn = induced_on_hh(c.a, c.b, [&](int n) { return tensor_power_map(c.a, c.b, c.f, n); }, D);
        for (int n = 0; n <= D; ++n)
            t.expect(tr[n] == fn[n], "HH_" + std::to_string(n) + "(Tr_fB) != HH_" + std::to_string(n) + "(f) for " +
                                         c.a.name() + " -> " + c.b.name());
    }
    for (const Algebra& a : bundled()) {
        auto h = hh_of_trace(regular_bimodule(a, 1), D);
        for (int n = 0; n <= D; ++n) {
            if (h[n] == SparseMatrix::identity(h[n].rows(), Q)) {
                t.expect(true, "");
                continue;
            }
            const bool minus = h[n] == -SparseMatrix::identity(h[n].rows(), Q);
            t.expect(false, "HH_" + std::to_string(n) + "(Tr_{A[1]}) = " + (minus ? "-id" : "not +-id") + " on " +
                                a.name() + " with sign scheme " + to_string(kTraceSign));
        }
    }
    return t;
}

long peak_rss_mb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss / 1024;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, std::function<Tally()>>> criteria{
        {"structural identities through degree 5", structural},
        {"Hochschild dimensions against the oracle", oracle_dimensions},
        {"cyclic homology", cyclic},
        {"SBI exactness and B = B'I", sbi},
        {"calculus axioms and mutation witnesses", calculus},
        {"derived invariance of the ladder", invariance},
        {"functoriality, normalization and shift", functoriality},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Tally t;
        try {
            t = criteria[i].second();
        } catch (const std::exception& e) {
            t.expect(false, std::string("exception: ") + e.what());
        }
        failed += !t.ok();
        std::cout << "criterion " << i + 1 << ": " << (t.ok() ? "PASS" : "FAIL") << "  " << criteria[i].first << " ["
                  << t.summary() << "] " << static_cast<int>(seconds_since(start) + 0.5) << " s" << std::endl;
    }

    Tally perf;
    const auto start = std::chrono::steady_clock::now();
    HochschildComplex big(a3_linear(Q));
    const SparseMatrix& b5 = big.b(5);
    const std::size_t r = rank(b5);
    perf.expect(b5.cols() == 46656, "C_5(kA_3) has " + std::to_string(b5.cols()) + " columns");
    perf.expect(r > 0, "rank of b_5 on kA_3 not computed");
    const double total = seconds_since(t0);
    const long mb = peak_rss_mb();
    perf.expect(total < 600, "suite took " + std::to_string(total) + " s");
    perf.expect(mb < 2048, "peak memory " + std::to_string(mb) + " MB");
    failed += !perf.ok();
    std::cout << "criterion 8: " << (perf.ok() ? "PASS" : "FAIL") << "  performance envelope [" << perf.summary()
              << "; total " << static_cast<int>(total + 0.5) << " s, peak " << mb << " MB, rank b_5(kA_3) = " << r
              << " of 46656 columns] " << static_cast<int>(seconds_since(start) + 0.5) << " s" << std::endl;
    return failed ? 1 : 0;
}

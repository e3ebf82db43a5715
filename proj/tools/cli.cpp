#include "cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

#include "ttcalc/calculus.hpp"
#include "ttcalc/cyclic.hpp"
#include "ttcalc/errors.hpp"
#include "ttcalc/transport.hpp"

namespace ttcalc {

namespace {

struct Config {
    std::vector<std::string> paths;
    int D = 4;
    std::string field;
    bool normalized = false;
    bool representatives = false;
    std::string format = "table";
    std::size_t max_chain_dim = Limits{}.max_chain_dim;

    Limits limits() const { return Limits{max_chain_dim}; }
    std::optional<Field> field_override() const {
        if (field.empty()) return std::nullopt;
        if (field == "Q") return Field::rationals();
        std::string digits = field;
        for (const char* prefix : {"Fp:", "F_", "F"})
            if (digits.rfind(prefix, 0) == 0) {
                digits = digits.substr(std::string(prefix).size());
                break;
            }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 10)
            throw ParseError("unknown field '" + field + "' (use Q or F<p>)");
        try {
            return Field::prime(static_cast<std::uint32_t>(std::stoul(digits)));
        } catch (const DomainError& e) {
            throw ParseError(e.what());
        } catch (const std::out_of_range&) {
            throw ParseError("prime out of range: " + digits);
        }
    }
};

struct Outcome {
    Json doc;
    int code = kExitOk;
};

Json matrix_json(const SparseMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Scalar* s = m.find(i, j);
            row.push_back(s ? s->to_string() : std::string("0"));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json checks_json(const Report& r) {
    Json out = Json::array();
    for (const auto& c : r.checks())
        out.push_back(Json{{"id", c.id}, {"passed", c.passed}, {"required", c.required}, {"detail", c.detail}});
    return out;
}

Json dims_json(const std::vector<HomologySpace>& h) {
    Json out = Json::array();
    for (const auto& s : h) out.push_back(s.dim());
    return out;
}

std::string chain_text(const HochschildComplex& c, int n, const Vector& v) {
    std::vector<std::uint32_t> tup(static_cast<std::size_t>(n) + 1);
    std::string out;
    for (const auto& e : v.entries()) {
        c.codec().decode_chain(e.index, tup);
        std::string term = "(";
        for (std::size_t i = 0; i < tup.size(); ++i) term += (i ? "|" : "") + c.algebra().basis()[tup[i]];
        term += ")";
        std::string coeff = e.value.to_string();
        bool negative = coeff[0] == '-';
        if (negative) coeff = coeff.substr(1);
        out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        if (coeff != "1") out += coeff + "*";
        out += term;
    }
    return out.empty() ? "0" : out;
}

Json header(const std::string& command, const Algebra& a, const Config& cfg) {
    return Json{{"command", command}, {"algebra", a.name()}, {"field", field_to_json(a.field())}, {"D", cfg.D}};
}

Algebra load_valid(const std::string& path, const Config& cfg, Outcome& out, const std::string& command) {
    Algebra a = load_algebra(path, cfg.field_override());
    Report r = validate(a);
    if (!r.ok()) {
        out.doc = header(command, a, cfg);
        out.doc["ok"] = false;
        out.doc["checks"] = checks_json(r);
        out.code = kExitFailure;
    }
    return a;
}

bool is_bimodule_document(const Json& j) { return j.is_object() && j.contains("terms"); }

Outcome cmd_validate(const Config& cfg) {
    Outcome out;
    const std::string& path = cfg.paths.at(0);
    Json j = read_json_file(path);
    Report r;
    if (is_bimodule_document(j)) {
        DgBimodule x = load_bimodule(path, cfg.field_override());
        r = validate_bimodule(x);
        out.doc = Json{{"command", "validate"}, {"kind", "bimodule"}, {"source", x.source.name()},
                       {"target", x.target.name()}, {"field", field_to_json(x.target.field())}};
    } else {
        Algebra a = algebra_from_json(j, cfg.field_override());
        r = validate(a);
        if (r.empty()) r.pass("algebra.axioms", "associativity and unit laws hold on all basis triples");
        out.doc = Json{{"command", "validate"}, {"kind", "algebra"}, {"algebra", a.name()},
                       {"field", field_to_json(a.field())}, {"dim", a.dim()}};
    }
    out.doc["ok"] = r.ok();
    out.doc["checks"] = checks_json(r);
    out.code = r.ok() ? kExitOk : kExitFailure;
    return out;
}

Outcome cmd_hh(const Config& cfg) {
    Outcome out;
    Algebra a = load_valid(cfg.paths.at(0), cfg, out, "hh");
    if (out.code) return out;
    HochschildComplex c(a, cfg.normalized, cfg.limits());
    auto hh = hochschild_homology(c, cfg.D);
    out.doc = header("hh", a, cfg);
    out.doc["normalized"] = cfg.normalized;
    out.doc["dimensions"] = dims_json(hh);
    if (cfg.representatives) {
        Json reps = Json::array();
        for (int n = 0; n <= cfg.D; ++n) {
            Json list = Json::array();
            for (const auto& v : hh[n].representatives()) list.push_back(chain_text(c, n, v));
            reps.push_back(std::move(list));
        }
        out.doc["representatives"] = std::move(reps);
    }
    return out;
}

Outcome cmd_hc(const Config& cfg) {
    Outcome out;
    Algebra a = load_valid(cfg.paths.at(0), cfg, out, "hc");
    if (out.code) return out;
    MixedComplex m = cfg.normalized ? normalized_mixed_complex(a, cfg.D, cfg.limits())
                                    : cone_mixed_complex(a, cfg.D, {}, cfg.limits());
    auto hc = cyclic_homology(m, cfg.D, cfg.limits());
    out.doc = header("hc", a, cfg);
    out.doc["model"] = m.model;
    out.doc["dimensions"] = dims_json(hc);
    return out;
}

Outcome cmd_calculus(const Config& cfg) {
    Outcome out;
    Algebra a = load_valid(cfg.paths.at(0), cfg, out, "calculus");
    if (out.code) return out;
    CalculusTable t(a, cfg.D, {}, cfg.limits());
    out.doc = header("calculus", a, cfg);
    Json hh = Json::array(), coh = Json::array();
    for (int n = 0; n <= cfg.D; ++n) {
        hh.push_back(t.hh_dim(n));
        coh.push_back(t.coh_dim(n));
    }
    out.doc["hh"] = std::move(hh);
    out.doc["cohomology"] = std::move(coh);
    Json cup = Json::array(), bracket = Json::array(), iota = Json::array(), B = Json::array();
    for (int m = 0; m <= cfg.D; ++m)
        for (int n = 0; n <= cfg.D; ++n) {
            if (t.has_cup(m, n)) cup.push_back(Json{{"m", m}, {"n", n}, {"matrix", matrix_json(t.cup_table(m, n))}});
            if (t.has_bracket(m, n))
                bracket.push_back(Json{{"m", m}, {"n", n}, {"matrix", matrix_json(t.bracket_table(m, n))}});
        }
    for (int n = 0; n <= cfg.D; ++n)
        for (int m = 0; m <= n; ++m)
            for (std::size_t k = 0; k < t.coh_dim(m); ++k)
                iota.push_back(Json{{"m", m}, {"class", k}, {"n", n}, {"matrix", matrix_json(t.iota_class(m, k, n))}});
    for (int n = 0; n < cfg.D; ++n) B.push_back(Json{{"n", n}, {"matrix", matrix_json(t.B(n))}});
    out.doc["cup"] = std::move(cup);
    out.doc["bracket"] = std::move(bracket);
    out.doc["iota"] = std::move(iota);
    out.doc["B"] = std::move(B);
    return out;
}

Outcome cmd_verify(const Config& cfg) {
    Outcome out;
    Algebra a = load_valid(cfg.paths.at(0), cfg, out, "verify");
    if (out.code) return out;
    Report r = verify_calculus(a, cfg.D, {}, cfg.limits());
    r.append(verify_sbi(a, cfg.D, {}, cfg.limits()));
    out.doc = header("verify", a, cfg);
    out.doc["ok"] = r.ok();
    out.doc["checks"] = checks_json(r);
    out.code = r.ok() ? kExitOk : kExitFailure;
    return out;
}

Outcome cmd_transport(const Config& cfg) {
    Outcome out;
    if (cfg.paths.size() != 1 && cfg.paths.size() != 3)
        throw ParseError("transport takes BIMODULE or SOURCE TARGET BIMODULE");
    DgBimodule x = load_bimodule(cfg.paths.back(), cfg.field_override());
    out.doc = Json{{"command", "transport"}, {"source", x.source.name()}, {"target", x.target.name()},
                   {"field", field_to_json(x.target.field())}, {"D", cfg.D}, {"sign_scheme", to_string(kTraceSign)}};
    Report r;
    if (cfg.paths.size() == 3) {
        Algebra a = load_algebra(cfg.paths[0], cfg.field_override());
        Algebra b = load_algebra(cfg.paths[1], cfg.field_override());
        if (!same_structure(a, x.source)) r.fail("input.source", "bimodule source is not " + a.name());
        if (!same_structure(b, x.target)) r.fail("input.target", "bimodule target is not " + b.name());
    }
    Json warnings = Json::array();
    if (r.ok()) {
        r.append(transport_report(x, cfg.D, kTraceSign, cfg.limits()));
        if (r.ok()) {
            CohomologyTransport ct = transport_cohomology_solve(x, cfg.D, kTraceSign, cfg.limits());
            r.append(ct.report);
            out.doc["cohomology_unique"] = ct.unique;
            if (!ct.unique) warnings.push_back("cohomology.inconclusive");
        }
    }
    out.doc["ok"] = r.ok();
    out.doc["warnings"] = std::move(warnings);
    out.doc["checks"] = checks_json(r);
    out.code = r.ok() ? kExitOk : kExitFailure;
    return out;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_table(const Json& doc, std::ostream& os) {
    for (const auto& [key, v] : doc.items()) {
        if (key == "checks") {
            for (const auto& c : v) {
                const bool passed = c["passed"].get<bool>();
                std::string status = c["required"].get<bool>() ? (passed ? "PASS" : "FAIL") : (passed ? "note+" : "note-");
                os << status << "  " << c["id"].get<std::string>();
                if (!c["detail"].get<std::string>().empty()) os << "  " << c["detail"].get<std::string>();
                os << "\n";
            }
        } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); })) {
            os << key << ":";
            for (const auto& e : v) os << " " << scalar_text(e);
            os << "\n";
        } else if (v.is_array()) {
            os << key << ":\n";
            for (std::size_t i = 0; i < v.size(); ++i) os << "  " << v[i].dump() << "\n";
        } else if (key == "field") {
            os << key << ": " << (v["type"] == "Q" ? std::string("Q") : "F" + v["p"].dump()) << "\n";
        } else {
            os << key << ": " << scalar_text(v) << "\n";
        }
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void render_csv(const Json& doc, std::ostream& os) {
    os << "key,index,value,detail\n";
    for (const auto& [key, v] : doc.items()) {
        if (key == "checks") {
            for (const auto& c : v) {
                std::string status = c["passed"].get<bool>() ? "pass" : "fail";
                if (!c["required"].get<bool>()) status = "note-" + status;
                os << "check," << csv_field(c["id"].get<std::string>()) << "," << status << ","
                   << csv_field(c["detail"].get<std::string>()) << "\n";
            }
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                os << key << "," << i << "," << csv_field(v[i].is_primitive() ? scalar_text(v[i]) : v[i].dump()) << ",\n";
        } else {
            os << key << ",," << csv_field(v.is_primitive() ? scalar_text(v) : v.dump()) << ",\n";
        }
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hochschild and cyclic homology, the calculus on them, and derived invariance by trace maps", "ttcalc"};
    app.require_subcommand(1);
    Config cfg;
    struct Spec {
        const char* name;
        const char* help;
        Outcome (*run)(const Config&);
        bool many;
    };
    const std::vector<Spec> specs{
        {"validate", "check an algebra or bimodule document", cmd_validate, false},
        {"hh", "Hochschild homology dimensions", cmd_hh, false},
        {"hc", "cyclic homology dimensions", cmd_hc, false},
        {"calculus", "cup, bracket, iota and B in class bases", cmd_calculus, false},
        {"verify", "check the calculus axioms and the SBI sequence", cmd_verify, false},
        {"transport", "derived invariance under the trace of a bimodule", cmd_transport, true},
    };
    std::vector<CLI::App*> subs;
    for (const Spec& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        auto* paths = sub->add_option("paths", cfg.paths, s.many ? "[SOURCE TARGET] BIMODULE" : "document or family name")
                          ->required();
        if (!s.many) paths->expected(1);
        sub->add_option("-D", cfg.D, "maximal degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--field", cfg.field, "coefficient field override: Q or F<p>");
        sub->add_flag("--normalized", cfg.normalized, "use the normalized complex");
        sub->add_flag("--representatives", cfg.representatives, "print class representatives");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
        sub->add_option("--max-chain-dim", cfg.max_chain_dim, "largest chain space to materialize")
            ->check(CLI::PositiveNumber);
        subs.push_back(sub);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        const int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? kExitOk : kExitParse;
    }
    try {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            Outcome o = specs[i].run(cfg);
            if (cfg.format == "json")
                out << o.doc.dump(2) << "\n";
            else if (cfg.format == "csv")
                render_csv(o.doc, out);
            else
                render_table(o.doc, out);
            return o.code;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const InvariantError& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitParse;
}

}  // namespace ttcalc

#include "ttcalc/io.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "ttcalc/errors.hpp"

namespace ttcalc {

namespace {

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) throw ParseError("unknown field '" + item.key() + "' in " + what);
}

const Json& require(const Json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(what + " is missing field '" + key + "'");
    return *it;
}

std::size_t index_from_json(const Json& j, std::size_t bound, const std::string& what) {
    if (!j.is_number_unsigned()) throw ParseError(what + ": expected a non-negative integer index");
    auto v = j.get<std::uint64_t>();
    if (v >= bound) throw ParseError(what + ": index " + std::to_string(v) + " out of range");
    return static_cast<std::size_t>(v);
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

Field field_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Q") return Field::rationals();
        throw ParseError("unknown field '" + s + "'");
    }
    reject_unknown_keys(j, {"type", "p"}, "field");
    const Json& type = require(j, "type", "field");
    if (!type.is_string()) throw ParseError("field type must be a string");
    const auto t = type.get<std::string>();
    if (t == "Q") {
        if (j.contains("p")) throw ParseError("field Q takes no 'p'");
        return Field::rationals();
    }
    if (t == "Fp") {
        const Json& p = require(j, "p", "field");
        if (!p.is_number_unsigned() || p.get<std::uint64_t>() >= (1ull << 31)) throw ParseError("bad prime");
        try {
            return Field::prime(static_cast<std::uint32_t>(p.get<std::uint64_t>()));
        } catch (const DomainError& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("unknown field type '" + t + "'");
}

Json field_to_json(const Field& f) {
    Json j;
    if (f.is_rational()) {
        j["type"] = "Q";
    } else {
        j["type"] = "Fp";
        j["p"] = f.characteristic();
    }
    return j;
}

Scalar scalar_from_json(const Json& j, const Field& f) {
    try {
        if (j.is_string()) return f.parse(j.get<std::string>());
        if (j.is_number_integer()) return f.from_int(j.get<long long>());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    throw ParseError("scalar must be a decimal or fraction string");
}

Json scalar_to_json(const Scalar& s) { return s.to_string(); }

Vector vector_from_json(const Json& j, const Field& f, std::size_t dim) {
    if (!j.is_array() || j.size() != dim)
        throw ParseError("expected a coefficient array of length " + std::to_string(dim));
    Vector v(dim);
    for (std::size_t k = 0; k < dim; ++k) v.push_back(static_cast<std::uint32_t>(k), scalar_from_json(j[k], f));
    return v;
}

Json vector_to_json(const Vector& v, const Field& f) {
    Json arr = Json::array();
    for (std::size_t k = 0; k < v.dim(); ++k) arr.push_back(v.at(k, f).to_string());
    return arr;
}

Algebra algebra_from_json(const Json& j, std::optional<Field> field_override) {
    reject_unknown_keys(j, {"name", "field", "dim", "basis", "unit", "mult", "idempotents"}, "algebra document");
    const Field f = field_override ? *field_override : field_from_json(require(j, "field", "algebra document"));
    const Json& dim_j = require(j, "dim", "algebra document");
    if (!dim_j.is_number_unsigned() || dim_j.get<std::uint64_t>() == 0 || dim_j.get<std::uint64_t>() > 10000)
        throw ParseError("'dim' must be a positive integer");
    const auto d = static_cast<std::size_t>(dim_j.get<std::uint64_t>());
    std::string name = "algebra";
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ParseError("'name' must be a string");
        name = j["name"].get<std::string>();
    }
    std::vector<std::string> basis;
    if (j.contains("basis")) {
        const Json& b = j["basis"];
        if (!b.is_array() || b.size() != d) throw ParseError("'basis' must list dim labels");
        for (const auto& label : b) {
            if (!label.is_string()) throw ParseError("basis labels must be strings");
            basis.push_back(label.get<std::string>());
        }
    } else {
        for (std::size_t k = 0; k < d; ++k) basis.push_back("e" + std::to_string(k));
    }
    Vector unit = vector_from_json(require(j, "unit", "algebra document"), f, d);
    const Json& mult_j = require(j, "mult", "algebra document");
    if (!mult_j.is_array()) throw ParseError("'mult' must be an array");
    std::vector<StructureConstant> mult;
    for (const auto& entry : mult_j) {
        if (!entry.is_array() || entry.size() != 4) throw ParseError("'mult' entries are [i, j, l, \"coeff\"]");
        mult.push_back({index_from_json(entry[0], d, "mult"), index_from_json(entry[1], d, "mult"),
                        index_from_json(entry[2], d, "mult"), scalar_from_json(entry[3], f)});
    }
    std::vector<Vector> idem;
    if (j.contains("idempotents")) {
        if (!j["idempotents"].is_array()) throw ParseError("'idempotents' must be an array");
        for (const auto& u : j["idempotents"]) idem.push_back(vector_from_json(u, f, d));
    }
    try {
        return Algebra(std::move(name), f, std::move(basis), std::move(unit), mult, std::move(idem));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

Json algebra_to_json(const Algebra& a) {
    Json j;
    j["name"] = a.name();
    j["field"] = field_to_json(a.field());
    j["dim"] = a.dim();
    j["basis"] = a.basis();
    j["unit"] = vector_to_json(a.unit(), a.field());
    Json mult = Json::array();
    for (const auto& sc : a.structure_constants()) mult.push_back(Json::array({sc.i, sc.j, sc.l, sc.coeff.to_string()}));
    j["mult"] = std::move(mult);
    if (!a.idempotents().empty()) {
        Json idem = Json::array();
        for (const auto& u : a.idempotents()) idem.push_back(vector_to_json(u, a.field()));
        j["idempotents"] = std::move(idem);
    }
    return j;
}

Algebra load_algebra(const std::string& path_or_family, std::optional<Field> field_override) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(path_or_family, ec))
        return algebra_from_json(read_json_file(path_or_family), field_override);
    if (path_or_family.find(".json") != std::string::npos) throw ParseError("cannot open '" + path_or_family + "'");
    return build(path_or_family, field_override ? *field_override : Field::rationals());
}

}  // namespace ttcalc

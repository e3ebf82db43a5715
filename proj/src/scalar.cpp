#include "ttcalc/scalar.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

#include "ttcalc/errors.hpp"

namespace ttcalc {

namespace {

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::uint32_t reduce(const mpz_class& z, std::uint32_t p) {
    mpz_class r = z % p;
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
    std::uint64_t result = 1;
    base %= p;
    while (exp) {
        if (exp & 1) result = result * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

}  // namespace

Field Field::prime(std::uint32_t p) {
    if (p >= (1u << 31) || !is_prime(p))
        throw DomainError("field characteristic must be a prime below 2^31, got " +
                          std::to_string(p));
    return Field(Kind::prime, p);
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long long v) const {
    if (is_rational()) return Scalar::rational(mpq_class(static_cast<long>(v)));
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return Scalar::residue(static_cast<std::uint64_t>(r), p_);
}

Scalar Field::parse(std::string_view text) const {
    auto bad = [&] { return ParseError("malformed scalar \"" + std::string(text) + "\""); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) {
        std::string_view digits = s;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
        if (digits.empty()) throw bad();
        for (char c : digits)
            if (c < '0' || c > '9') throw bad();
        std::string owned(s);
        if (owned[0] == '+') owned.erase(0, 1);
        return mpz_class(owned);
    };
    mpz_class num = parse_int(text.substr(0, slash));
    mpz_class den = slash == std::string_view::npos ? mpz_class(1) : parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in scalar \"" + std::string(text) + "\"");
    if (is_rational()) {
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar::rational(std::move(q));
    }
    std::uint32_t d = reduce(den, p_);
    if (d == 0)
        throw ParseError("denominator of \"" + std::string(text) + "\" vanishes in " + name());
    return Scalar::residue(reduce(num, p_), p_) / Scalar::residue(d, p_);
}

std::string Field::name() const {
    return is_rational() ? "Q" : "F_" + std::to_string(p_);
}

Scalar Scalar::rational(mpq_class q) {
    q.canonicalize();
    return Scalar(std::move(q));
}

Scalar Scalar::residue(std::uint64_t value, std::uint32_t p) {
    return Scalar(Residue{static_cast<std::uint32_t>(value % p), p});
}

Field Scalar::field() const {
    if (auto r = std::get_if<Residue>(&rep_)) return Field(Field::Kind::prime, r->p);
    return Field::rationals();
}

bool Scalar::is_zero() const {
    if (auto r = std::get_if<Residue>(&rep_)) return r->value == 0;
    return sgn(std::get<mpq_class>(rep_)) == 0;
}

bool Scalar::is_one() const {
    if (auto r = std::get_if<Residue>(&rep_)) return r->value == 1;
    return std::get<mpq_class>(rep_) == 1;
}

void Scalar::check_same_field(const Scalar& o) const {
    if (rep_.index() != o.rep_.index())
        throw std::logic_error("arithmetic between scalars of different fields");
    if (auto r = std::get_if<Residue>(&rep_); r && r->p != std::get<Residue>(o.rep_).p)
        throw std::logic_error("arithmetic between scalars of different fields");
}

Scalar Scalar::operator-() const {
    if (auto r = std::get_if<Residue>(&rep_))
        return Scalar(Residue{r->value == 0 ? 0 : r->p - r->value, r->p});
    return Scalar(mpq_class(-std::get<mpq_class>(rep_)));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same_field(o);
    if (auto r = std::get_if<Residue>(&rep_)) {
        std::uint64_t s = std::uint64_t(r->value) + std::get<Residue>(o.rep_).value;
        r->value = static_cast<std::uint32_t>(s % r->p);
    } else {
        std::get<mpq_class>(rep_) += std::get<mpq_class>(o.rep_);
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same_field(o);
    if (auto r = std::get_if<Residue>(&rep_)) {
        std::uint64_t s = std::uint64_t(r->value) + r->p - std::get<Residue>(o.rep_).value;
        r->value = static_cast<std::uint32_t>(s % r->p);
    } else {
        std::get<mpq_class>(rep_) -= std::get<mpq_class>(o.rep_);
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same_field(o);
    if (auto r = std::get_if<Residue>(&rep_)) {
        std::uint64_t s = std::uint64_t(r->value) * std::get<Residue>(o.rep_).value;
        r->value = static_cast<std::uint32_t>(s % r->p);
    } else {
        std::get<mpq_class>(rep_) *= std::get<mpq_class>(o.rep_);
    }
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (auto r = std::get_if<Residue>(&rep_)) return Scalar(Residue{pow_mod(r->value, r->p - 2, r->p), r->p});
    return Scalar(mpq_class(1 / std::get<mpq_class>(rep_)));
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same_field(o);
    return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) { return a.rep_ == b.rep_; }

std::string Scalar::to_string() const {
    if (auto r = std::get_if<Residue>(&rep_)) return std::to_string(r->value);
    return std::get<mpq_class>(rep_).get_str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace ttcalc

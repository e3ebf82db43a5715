#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace ttcalc {

class Scalar;

/**
 * The coefficient field of a computation: Q, or F_p for a prime p < 2^31.
 *
 * A Field is a small value type. Scalars remember which field they belong to,
 * and arithmetic between scalars of different fields throws std::logic_error.
 */
class Field {
public:
    enum class Kind { rational, prime };

    static Field rationals() { return Field(Kind::rational, 0); }
    /// Throws DomainError unless p is a prime below 2^31.
    static Field prime(std::uint32_t p);

    Kind kind() const { return kind_; }
    std::uint32_t characteristic() const { return p_; }
    bool is_rational() const { return kind_ == Kind::rational; }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long long v) const;
    /// Parses "n", "-n" or "a/b" (decimal). Throws ParseError.
    Scalar parse(std::string_view text) const;

    /// "Q" or "F_p".
    std::string name() const;

    bool operator==(const Field&) const = default;

private:
    friend class Scalar;
    Field(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::uint32_t p_;
};

/// An exact field element. Rationals are canonical (gmp), residues lie in [0, p).
class Scalar {
public:
    /// Rational zero; prefer Field::zero() in field-generic code.
    Scalar() = default;

    static Scalar rational(mpq_class q);
    static Scalar residue(std::uint64_t value, std::uint32_t p);

    Field field() const;
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    /// Throws std::domain_error on division by zero.
    Scalar& operator/=(const Scalar& o);
    Scalar inverse() const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// Decimal "n" or "a/b" for rationals, "r" in [0,p) for residues.
    std::string to_string() const;

private:
    struct Residue {
        std::uint32_t value;
        std::uint32_t p;
        bool operator==(const Residue&) const = default;
    };

    explicit Scalar(mpq_class q) : rep_(std::move(q)) {}
    explicit Scalar(Residue r) : rep_(r) {}

    void check_same_field(const Scalar& o) const;

    std::variant<mpq_class, Residue> rep_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace ttcalc

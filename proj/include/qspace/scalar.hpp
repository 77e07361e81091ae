#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qspace/errors.hpp"

namespace qspace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Deterministic trial-division primality test. Intended for the small
// moduli used in finite-field censuses.
bool is_prime(std::uint64_t p);

// Descriptor of the working field: the rationals or a prime field GF(p).
class Field {
public:
    static Field rationals() { return Field(0); }
    static Field prime(std::uint64_t p); // validates primality, requires p < 2^31

    bool is_rational() const { return p_ == 0; }
    bool is_prime_field() const { return p_ != 0; }

    // Prime-field modulus; calling this on the rationals is an error.
    std::uint64_t modulus() const;

    bool operator==(const Field& other) const = default;

    std::string str() const; // "rational" or "GF(p)"

private:
    explicit Field(std::uint64_t p) : p_(p) {}
    std::uint64_t p_;
};

// An exact field element in canonical form: a reduced big rational with
// positive denominator, or a residue in [0, p). Equality is structural.
class Scalar {
public:
    Scalar() : field_(Field::rationals()) {}

    static Scalar zero(const Field& f);
    static Scalar one(const Field& f);
    static Scalar of_int(const Field& f, long long v);
    static Scalar of_rational(BigRational v);
    static Scalar of_residue(const Field& f, std::uint64_t r); // reduces mod p

    // Grammar: "[-]?digits(/digits)?" over the rationals, "digits" over GF(p).
    static Scalar parse(const std::string& text, const Field& f);

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar inverse() const; // throws ValidationError on zero
    Scalar pow(std::uint64_t e) const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    // Total order usable as a container key; compares field first.
    bool operator<(const Scalar& o) const;

    std::string str() const; // "-1", "1/2", "3"
    std::size_t hash() const;

    // Prime-field residue; only meaningful when field().is_prime_field().
    std::uint64_t residue() const { return res_; }
    const BigRational& rational_value() const { return rat_; }

private:
    explicit Scalar(const Field& f) : field_(f) {}
    void require_same_field(const Scalar& o) const;

    Field field_;
    BigRational rat_;        // rational case
    std::uint64_t res_ = 0;  // prime case
};

} // namespace qspace

template <>
struct std::hash<qspace::Scalar> {
    std::size_t operator()(const qspace::Scalar& s) const { return s.hash(); }
};

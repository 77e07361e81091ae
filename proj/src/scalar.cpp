#include "qspace/scalar.hpp"

#include <cctype>

namespace qspace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t d = 3; d * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

Field Field::prime(std::uint64_t p) {
    if (p >= (1ull << 31)) {
        throw ValidationError("prime modulus too large: " + std::to_string(p) +
                              " (must be < 2^31)");
    }
    if (!is_prime(p)) {
        throw ValidationError("not a prime modulus: " + std::to_string(p));
    }
    return Field(p);
}

std::uint64_t Field::modulus() const {
    if (!is_prime_field()) throw ValidationError("rational field has no modulus");
    return p_;
}

std::string Field::str() const {
    return is_rational() ? "rational" : "GF(" + std::to_string(p_) + ")";
}

namespace {

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on (a, p), p prime, a != 0
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        t -= quot * new_t;
        std::swap(t, new_t);
        r -= quot * new_r;
        std::swap(r, new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    }
    return true;
}

} // namespace

Scalar Scalar::zero(const Field& f) {
    Scalar s(f);
    return s;
}

Scalar Scalar::one(const Field& f) {
    Scalar s(f);
    if (f.is_rational()) {
        s.rat_ = 1;
    } else {
        s.res_ = 1 % f.modulus();
    }
    return s;
}

Scalar Scalar::of_int(const Field& f, long long v) {
    Scalar s(f);
    if (f.is_rational()) {
        s.rat_ = v;
    } else {
        std::int64_t p = static_cast<std::int64_t>(f.modulus());
        std::int64_t r = v % p;
        if (r < 0) r += p;
        s.res_ = static_cast<std::uint64_t>(r);
    }
    return s;
}

Scalar Scalar::of_rational(BigRational v) {
    Scalar s(Field::rationals());
    s.rat_ = std::move(v);
    return s;
}

Scalar Scalar::of_residue(const Field& f, std::uint64_t r) {
    if (!f.is_prime_field()) throw ValidationError("of_residue requires a prime field");
    Scalar s(f);
    s.res_ = r % f.modulus();
    return s;
}

Scalar Scalar::parse(const std::string& text, const Field& f) {
    if (f.is_prime_field()) {
        if (!all_digits(text, 0, text.size())) {
            throw ValidationError("invalid GF(p) scalar literal: \"" + text + "\"");
        }
        std::uint64_t p = f.modulus();
        std::uint64_t r = 0;
        for (char c : text) r = (r * 10 + static_cast<std::uint64_t>(c - '0')) % p;
        return of_residue(f, r);
    }
    std::size_t start = 0;
    bool neg = false;
    if (!text.empty() && text[0] == '-') {
        neg = true;
        start = 1;
    }
    std::size_t slash = text.find('/');
    BigInt num, den = 1;
    if (slash == std::string::npos) {
        if (!all_digits(text, start, text.size())) {
            throw ValidationError("invalid rational scalar literal: \"" + text + "\"");
        }
        num = BigInt(text.substr(start));
    } else {
        if (!all_digits(text, start, slash) || !all_digits(text, slash + 1, text.size())) {
            throw ValidationError("invalid rational scalar literal: \"" + text + "\"");
        }
        num = BigInt(text.substr(start, slash - start));
        den = BigInt(text.substr(slash + 1));
        if (den == 0) {
            throw ValidationError("zero denominator in scalar literal: \"" + text + "\"");
        }
    }
    if (neg) num = -num;
    return of_rational(BigRational(num, den));
}

bool Scalar::is_zero() const {
    return field_.is_rational() ? rat_ == 0 : res_ == 0;
}

bool Scalar::is_one() const {
    return field_.is_rational() ? rat_ == 1 : res_ == 1 % field_.modulus();
}

void Scalar::require_same_field(const Scalar& o) const {
    if (field_ != o.field_) {
        throw ValidationError("scalar field mismatch: " + field_.str() + " vs " +
                              o.field_.str());
    }
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same_field(o);
    Scalar s(field_);
    if (field_.is_rational()) {
        s.rat_ = rat_ + o.rat_;
    } else {
        s.res_ = (res_ + o.res_) % field_.modulus();
    }
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator-() const {
    Scalar s(field_);
    if (field_.is_rational()) {
        s.rat_ = -rat_;
    } else {
        s.res_ = res_ == 0 ? 0 : field_.modulus() - res_;
    }
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    require_same_field(o);
    Scalar s(field_);
    if (field_.is_rational()) {
        s.rat_ = rat_ * o.rat_;
    } else {
        s.res_ = (res_ * o.res_) % field_.modulus(); // p < 2^31, no overflow
    }
    return s;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw ValidationError("inversion of zero");
    Scalar s(field_);
    if (field_.is_rational()) {
        s.rat_ = 1 / rat_;
    } else {
        s.res_ = mod_inverse(res_, field_.modulus());
    }
    return s;
}

Scalar Scalar::pow(std::uint64_t e) const {
    Scalar acc = one(field_);
    Scalar base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    return field_.is_rational() ? rat_ == o.rat_ : res_ == o.res_;
}

bool Scalar::operator<(const Scalar& o) const {
    if (field_ != o.field_) {
        if (field_.is_rational() != o.field_.is_rational())
            return field_.is_rational();
        return field_.modulus() < o.field_.modulus();
    }
    return field_.is_rational() ? rat_ < o.rat_ : res_ < o.res_;
}

std::string Scalar::str() const {
    return field_.is_rational() ? rat_.str() : std::to_string(res_);
}

std::size_t Scalar::hash() const {
    if (field_.is_prime_field()) {
        return std::hash<std::uint64_t>{}(res_ * 0x9e3779b97f4a7c15ull ^ field_.modulus());
    }
    return std::hash<std::string>{}(rat_.str());
}

} // namespace qspace

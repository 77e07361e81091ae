#include "qspace/skewpoly.hpp"

#include "qspace/errors.hpp"

namespace qspace {

SkewPoly::SkewPoly(Field field, int n) : field_(field), n_(n) {
    if (n < 1) throw ValidationError("polynomial ring needs at least one variable");
}

SkewPoly SkewPoly::constant(Field field, int n, const Scalar& c) {
    SkewPoly f(field, n);
    f.add_term(Monomial(n, 0), c);
    return f;
}

SkewPoly SkewPoly::variable(Field field, int n, int i) {
    if (i < 1 || i > n) throw ValidationError("variable index out of range");
    SkewPoly f(field, n);
    Monomial mono(n, 0);
    mono[i - 1] = 1;
    f.add_term(mono, Scalar::one(field));
    return f;
}

std::uint64_t SkewPoly::degree() const {
    std::uint64_t d = 0;
    for (const auto& [mono, c] : terms_) d = std::max(d, total_degree(mono));
    return d;
}

void SkewPoly::add_term(const Monomial& mono, const Scalar& c) {
    if (static_cast<int>(mono.size()) != n_) {
        throw ValidationError("monomial arity does not match the ring");
    }
    if (!(c.field() == field_)) throw ValidationError("coefficient field mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(mono, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const {
    if (n_ != o.n_ || !(field_ == o.field_)) throw ValidationError("polynomial ring mismatch");
    SkewPoly out = *this;
    for (const auto& [mono, c] : o.terms_) out.add_term(mono, c);
    return out;
}

SkewPoly SkewPoly::operator-(const SkewPoly& o) const {
    if (n_ != o.n_ || !(field_ == o.field_)) throw ValidationError("polynomial ring mismatch");
    SkewPoly out = *this;
    for (const auto& [mono, c] : o.terms_) out.add_term(mono, -c);
    return out;
}

SkewPoly SkewPoly::scaled(const Scalar& c) const {
    SkewPoly out(field_, n_);
    if (c.is_zero()) return out;
    for (const auto& [mono, coeff] : terms_) out.add_term(mono, coeff * c);
    return out;
}

bool SkewPoly::operator==(const SkewPoly& o) const {
    return n_ == o.n_ && field_ == o.field_ && terms_ == o.terms_;
}

std::string SkewPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    const Scalar one = Scalar::one(field_);
    for (const auto& [mono, c] : terms_) {
        if (!out.empty()) out += " + ";
        bool trivial_mono = total_degree(mono) == 0;
        if (trivial_mono || !(c == one)) {
            out += c.str();
            if (!trivial_mono) out += "*";
        }
        bool first = true;
        for (int i = 1; i <= n_; ++i) {
            auto e = mono[i - 1];
            if (e == 0) continue;
            if (!first) out += "*";
            out += "x" + std::to_string(i);
            if (e > 1) out += "^" + std::to_string(e);
            first = false;
        }
    }
    return out;
}

namespace {

void check_ring(const QMatrix& q, const SkewPoly& f) {
    if (f.vars() != q.size()) throw ValidationError("polynomial arity does not match q");
    if (!(f.field() == q.field())) throw ValidationError("polynomial field does not match q");
}

// coefficient picked up when x^a (left) crosses x^b (right) into x^{a+b}
Scalar reorder_twist(const QMatrix& q, const Monomial& a, const Monomial& b) {
    Scalar twist = Scalar::one(q.field());
    const int n = q.size();
    for (int i = 1; i <= n; ++i) {
        if (b[i - 1] == 0) continue;
        for (int j = i + 1; j <= n; ++j) {
            if (a[j - 1] == 0) continue;
            std::uint64_t e = static_cast<std::uint64_t>(b[i - 1]) * a[j - 1];
            twist = twist * q.at(i, j).pow(e);
        }
    }
    return twist;
}

} // namespace

SkewPoly normal_multiply(const QMatrix& q, const SkewPoly& f, const SkewPoly& g,
                         std::uint64_t degree_cap) {
    check_ring(q, f);
    check_ring(q, g);
    if (!f.is_zero() && !g.is_zero() && f.degree() + g.degree() > degree_cap) {
        throw CapExceededError("product degree exceeds cap " + std::to_string(degree_cap));
    }
    SkewPoly out(q.field(), q.size());
    const int n = q.size();
    for (const auto& [a, ca] : f.terms()) {
        for (const auto& [b, cb] : g.terms()) {
            Monomial sum(n);
            for (int i = 0; i < n; ++i) sum[i] = a[i] + b[i];
            out.add_term(sum, ca * cb * reorder_twist(q, a, b));
        }
    }
    return out;
}

SkewPoly apply_linear_map(const FieldMatrix& m, const SkewPoly& f, const QMatrix& q,
                          std::uint64_t degree_cap) {
    check_ring(q, f);
    if (m.size() != q.size() || !(m.field() == q.field())) {
        throw ValidationError("matrix does not match q");
    }
    if (f.degree() > degree_cap) {
        throw CapExceededError("polynomial degree exceeds cap " + std::to_string(degree_cap));
    }
    const int n = q.size();
    // images of the generators: x_i -> sum_j m_ij x_j
    std::vector<SkewPoly> image;
    image.reserve(n);
    for (int i = 1; i <= n; ++i) {
        SkewPoly row(q.field(), n);
        Monomial mono(n, 0);
        for (int j = 1; j <= n; ++j) {
            mono[j - 1] = 1;
            row.add_term(mono, m.at(i, j));
            mono[j - 1] = 0;
        }
        image.push_back(std::move(row));
    }
    SkewPoly out(q.field(), n);
    for (const auto& [mono, c] : f.terms()) {
        SkewPoly prod = SkewPoly::constant(q.field(), n, c);
        for (int i = 1; i <= n; ++i) {
            for (std::uint32_t e = 0; e < mono[i - 1]; ++e) {
                prod = normal_multiply(q, prod, image[i - 1], degree_cap);
            }
        }
        out = out + prod;
    }
    return out;
}

bool relations_preserved(const QMatrix& q, const FieldMatrix& m) {
    if (m.size() != q.size() || !(m.field() == q.field())) {
        throw ValidationError("matrix does not match q");
    }
    const int n = q.size();
    std::vector<SkewPoly> image;
    image.reserve(n);
    for (int i = 1; i <= n; ++i) {
        SkewPoly xi = SkewPoly::variable(q.field(), n, i);
        image.push_back(apply_linear_map(m, xi, q));
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            // image of the relator x_j x_i - q_ij x_i x_j must vanish
            SkewPoly lhs = normal_multiply(q, image[j - 1], image[i - 1]);
            SkewPoly rhs = normal_multiply(q, image[i - 1], image[j - 1]).scaled(q.at(i, j));
            if (!(lhs - rhs).is_zero()) return false;
        }
    }
    return true;
}

GradedPiece graded_basis(int n, int d) {
    if (n < 1) throw ValidationError("graded basis needs at least one variable");
    if (d < 0) throw ValidationError("degree must be non-negative");
    GradedPiece out{d, {}};
    Monomial mono(n, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            mono[pos] = static_cast<std::uint32_t>(remaining);
            out.basis.push_back(mono);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            mono[pos] = static_cast<std::uint32_t>(v);
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, d);
    return out;
}

} // namespace qspace

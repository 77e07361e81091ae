#include "qspace/report.hpp"

#include <algorithm>
#include <thread>

#include <nlohmann/json.hpp>

#include "qspace/errors.hpp"

namespace qspace {

namespace {

std::string superscript(int n) {
    static const char* digit[10] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string out;
    for (char c : std::to_string(n)) out += digit[c - '0'];
    return out;
}

std::string join_cycles(const std::vector<Perm>& perms) {
    std::string out;
    for (const Perm& p : perms) {
        if (!out.empty()) out += ", ";
        out += p.cycles();
    }
    return out;
}

} // namespace

std::string structure_string(const std::vector<int>& block_sizes,
                             const std::string& quotient_name,
                             std::uint64_t quotient_order) {
    const int n = [&] {
        int s = 0;
        for (int b : block_sizes) s += b;
        return s;
    }();
    if (block_sizes.size() == 1 && quotient_order == 1) {
        return "GL_" + std::to_string(n) + "(k)";
    }
    bool all_singleton =
        std::all_of(block_sizes.begin(), block_sizes.end(), [](int b) { return b == 1; });
    if (all_singleton) {
        return "(k*)" + superscript(n) + " ⋊ " + quotient_name;
    }
    std::string out = "(";
    for (std::size_t w = 0; w < block_sizes.size(); ++w) {
        if (w) out += " × ";
        out += "GL_" + std::to_string(block_sizes[w]);
    }
    out += ") ⋊ " + quotient_name;
    return out;
}

AutReport analyze(const QMatrix& q, Engine engine, const SearchOptions& opts) {
    BlockPartition blocks = block_decomposition(q);
    PermGroup p = compatible_group(q, engine, opts);
    PermGroup i = invariant_subgroup(q, p, blocks);
    CosetList cosets = quotient_cosets(p, i);
    GroupName qname = identify_quotient(cosets);
    std::vector<int> sizes = blocks.block_sizes();
    std::string structure = structure_string(sizes, qname.name, qname.order);
    return AutReport{q.size(),
                     q.field(),
                     blocks,
                     std::move(sizes),
                     p.order(),
                     i.order(),
                     qname.order,
                     p.generators(),
                     qname,
                     std::move(structure),
                     std::move(p),
                     std::move(i),
                     std::move(cosets)};
}

nlohmann::json AutReport::to_json() const {
    nlohmann::json jblocks = nlohmann::json::array();
    for (const auto& b : blocks.blocks) jblocks.push_back(b);
    nlohmann::json pgens = nlohmann::json::array();
    for (const Perm& g : p_generators) pgens.push_back(g.cycles());
    nlohmann::json qgens = nlohmann::json::array();
    for (const Perm& g : quotient_name.generators) qgens.push_back(g.cycles());
    return nlohmann::json{{"n", n},
                          {"field", field_to_json(field)},
                          {"blocks", jblocks},
                          {"block_sizes", block_sizes},
                          {"p_order", p_order},
                          {"p_generators", pgens},
                          {"i_order", i_order},
                          {"quotient_order", quotient_order},
                          {"quotient_name", quotient_name.name},
                          {"quotient_generators", qgens},
                          {"structure", structure}};
}

std::string AutReport::text() const {
    std::string out;
    out += "n         : " + std::to_string(n) + "\n";
    out += "field     : " + field.str() + "\n";
    out += "blocks    : ";
    for (const auto& b : blocks.blocks) {
        out += "{";
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (k) out += ",";
            out += std::to_string(b[k]);
        }
        out += "} ";
    }
    out += "\n";
    out += "|P_q|     : " + std::to_string(p_order);
    if (!p_generators.empty()) out += "   generators: " + join_cycles(p_generators);
    out += "\n";
    if (p_order <= 24) {
        out += "P_q       : " + join_cycles(p_group.elements()) + "\n";
    }
    out += "|I_q|     : " + std::to_string(i_order) + "\n";
    if (i_order <= 24) {
        out += "I_q       : " + join_cycles(i_group.elements()) + "\n";
    }
    out += "quotient  : " + quotient_name.name + " (order " +
           std::to_string(quotient_order) + ")\n";
    out += "structure : " + structure + "\n";
    return out;
}

std::uint64_t gl_order(int b, std::uint64_t p) {
    if (b < 1) throw ValidationError("block size must be >= 1");
    std::uint64_t pb = 1;
    for (int k = 0; k < b; ++k) pb *= p;
    std::uint64_t out = 1, pi = 1;
    for (int k = 0; k < b; ++k) {
        out *= pb - pi;
        pi *= p;
    }
    return out;
}

namespace {

// membership of a digit matrix (row-major, values mod p) against the label
// pattern: every pair of nonzero positions (i,s),(j,t) needs
// label(i,j) == label(s,t), plus invertibility mod p
bool member_digits(const std::vector<std::uint32_t>& v, const std::vector<int>& lab,
                   int n, std::uint64_t p) {
    int rows[196], cols[196];
    int z = 0;
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < n; ++s) {
            if (v[i * n + s] != 0) {
                rows[z] = i;
                cols[z] = s;
                ++z;
            }
        }
    }
    if (z < n) return false; // too sparse to be invertible
    for (int a = 0; a < z; ++a) {
        for (int b = 0; b < z; ++b) {
            if (lab[rows[a] * n + rows[b]] != lab[cols[a] * n + cols[b]]) return false;
        }
    }
    // invertibility mod p
    std::uint64_t w[196];
    for (int k = 0; k < n * n; ++k) w[k] = v[k];
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row) {
            if (w[row * n + col] % p != 0) {
                pivot = row;
                break;
            }
        }
        if (pivot < 0) return false;
        if (pivot != col) {
            for (int k = col; k < n; ++k) std::swap(w[pivot * n + k], w[col * n + k]);
        }
        // eliminate without division: row_r <- pivot_val * row_r - factor * row_col
        std::uint64_t pv = w[col * n + col] % p;
        for (int row = col + 1; row < n; ++row) {
            std::uint64_t f = w[row * n + col] % p;
            if (f == 0) continue;
            for (int k = col; k < n; ++k) {
                std::uint64_t a = pv * (w[row * n + k] % p) % p;
                std::uint64_t b = f * (w[col * n + k] % p) % p;
                w[row * n + k] = (a + p - b) % p;
            }
        }
    }
    return true;
}

std::uint64_t census_range(const std::vector<int>& lab, int n, std::uint64_t p,
                           std::uint64_t lo, std::uint64_t hi) {
    const int nn = n * n;
    std::vector<std::uint32_t> v(nn);
    std::uint64_t x = lo;
    for (int k = 0; k < nn; ++k) {
        v[k] = static_cast<std::uint32_t>(x % p);
        x /= p;
    }
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        if (member_digits(v, lab, n, p)) ++count;
        for (int k = 0; k < nn; ++k) {
            if (++v[k] < p) break;
            v[k] = 0;
        }
    }
    return count;
}

} // namespace

CensusResult census(const QMatrix& q, std::uint64_t p, std::uint64_t budget, int workers) {
    if (!is_prime(p)) throw ValidationError("census modulus must be prime");
    const int n = q.size();
    if (n > 14) throw CapExceededError("census dimension too large");
    std::uint64_t total = 1;
    for (int k = 0; k < n * n; ++k) {
        if (total > budget / p) {
            throw CapExceededError("census space p^(n^2) exceeds budget " +
                                   std::to_string(budget));
        }
        total *= p;
    }
    std::vector<int> lab(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) lab[(i - 1) * n + (j - 1)] = q.label(i, j);
    }
    int w = std::clamp(workers, 1, 64);
    std::uint64_t counted = 0;
    if (w == 1 || total < 4096) {
        counted = census_range(lab, n, p, 0, total);
    } else {
        std::vector<std::uint64_t> part(w, 0);
        std::vector<std::thread> pool;
        for (int t = 0; t < w; ++t) {
            std::uint64_t lo = total / w * t + std::min<std::uint64_t>(t, total % w);
            std::uint64_t hi =
                total / w * (t + 1) + std::min<std::uint64_t>(t + 1, total % w);
            pool.emplace_back(
                [&part, &lab, n, p, lo, hi, t]() { part[t] = census_range(lab, n, p, lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (std::uint64_t c : part) counted += c;
    }
    AutReport report = analyze(q);
    std::uint64_t predicted = report.quotient_order;
    for (int b : report.block_sizes) predicted *= gl_order(b, p);
    return CensusResult{p, n, total, counted, predicted};
}

nlohmann::json CensusResult::to_json() const {
    return nlohmann::json{{"p", p},           {"n", n},
                          {"total", total},   {"counted", counted},
                          {"predicted", predicted}, {"match", match()}};
}

MemberSampler::MemberSampler(const QMatrix& q, const BlockPartition& blocks,
                             const PermGroup& p, std::uint64_t seed)
    : q_(q), blocks_(blocks), p_(p), eng_(seed) {
    if (blocks.degree() != q.size() || p.degree() != q.size()) {
        throw ValidationError("sampler inputs disagree on dimension");
    }
}

std::uint64_t MemberSampler::below(std::uint64_t k) {
    // rejection sampling keeps the draw unbiased and engine-portable
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % k;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % k;
}

Scalar MemberSampler::random_scalar() {
    Field f = q_.field();
    if (f.is_prime_field()) return Scalar::of_residue(f, below(f.modulus()));
    return Scalar::of_int(f, static_cast<long long>(below(7)) - 3);
}

FieldMatrix MemberSampler::random_matrix() {
    const int n = q_.size();
    FieldMatrix m(q_.field(), n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) m.set(i, j, random_scalar());
    }
    return m;
}

FieldMatrix MemberSampler::next() {
    const Field f = q_.field();
    const Perm& sigma = p_.elements()[below(p_.order())];
    std::vector<FieldMatrix> factors;
    for (const auto& b : blocks_.blocks) {
        const int s = static_cast<int>(b.size());
        FieldMatrix factor(f, s);
        do {
            for (int i = 1; i <= s; ++i) {
                for (int j = 1; j <= s; ++j) factor.set(i, j, random_scalar());
            }
        } while (!factor.is_invertible());
        factors.push_back(std::move(factor));
    }
    return permutation_matrix(sigma, f) * embed_blocks(blocks_, factors, f);
}

FieldMatrix random_member(const QMatrix& q, const BlockPartition& blocks,
                          const PermGroup& p, std::uint64_t seed) {
    return MemberSampler(q, blocks, p, seed).next();
}

Perm skeleton_coset(const QMatrix& q, const PermGroup& i, const FieldMatrix& m) {
    if (!is_member(q, m)) {
        throw ValidationError("skeleton coset is only defined on group members");
    }
    auto pi = skeleton_any(m);
    if (!pi) throw ValidationError("member matrix has no skeleton"); // unreachable
    return coset_min(*pi, i);
}

bool skeleton_coset_homomorphism(const QMatrix& q, const BlockPartition& blocks,
                                 const PermGroup& p, const PermGroup& i, int samples,
                                 std::uint64_t seed) {
    MemberSampler sampler(q, blocks, p, seed);
    for (int s = 0; s < samples; ++s) {
        FieldMatrix m = sampler.next();
        FieldMatrix w = sampler.next();
        Perm lhs = skeleton_coset(q, i, m * w);
        Perm rhs = coset_min(skeleton_coset(q, i, m) * skeleton_coset(q, i, w), i);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

} // namespace qspace

#include "qspace/perm.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>
#include <unordered_set>

namespace qspace {

namespace {

struct ImageHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h = h * 1000003u + static_cast<std::size_t>(x);
        return h;
    }
};

using ImageSet = std::unordered_set<std::vector<int>, ImageHash>;

} // namespace

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
    const int n = degree();
    if (n == 0) throw ValidationError("permutation degree must be >= 1");
    std::vector<bool> seen(n, false);
    for (int v : images_) {
        if (v < 1 || v > n || seen[v - 1]) {
            throw ValidationError("image array is not a bijection of {1,...,n}");
        }
        seen[v - 1] = true;
    }
}

Perm Perm::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    return Perm(std::move(img));
}

Perm Perm::operator*(const Perm& o) const {
    if (degree() != o.degree()) throw ValidationError("permutation degree mismatch");
    std::vector<int> img(images_.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = images_[o.images_[i] - 1];
    return Perm(std::move(img));
}

Perm Perm::inverse() const {
    std::vector<int> img(images_.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[images_[i] - 1] = static_cast<int>(i) + 1;
    }
    return Perm(std::move(img));
}

bool Perm::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i] != static_cast<int>(i) + 1) return false;
    }
    return true;
}

int Perm::order() const {
    Perm x = *this;
    int k = 1;
    while (!x.is_identity()) {
        x = x * (*this);
        ++k;
    }
    return k;
}

std::string Perm::cycles() const {
    const int n = degree();
    std::vector<bool> visited(n, false);
    std::string out;
    for (int start = 1; start <= n; ++start) {
        if (visited[start - 1] || (*this)(start) == start) continue;
        out += "(";
        int cur = start;
        bool first = true;
        do {
            if (!first) out += ",";
            out += std::to_string(cur);
            visited[cur - 1] = true;
            cur = (*this)(cur);
            first = false;
        } while (cur != start);
        out += ")";
    }
    return out.empty() ? "()" : out;
}

PermGroup PermGroup::from_elements(int n, std::vector<Perm> elems) {
    for (const Perm& p : elems) {
        if (p.degree() != n) throw ValidationError("group element degree mismatch");
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty() || !elems.front().is_identity()) {
        throw ValidationError("group must contain the identity");
    }
    auto contains = [&elems](const Perm& p) {
        return std::binary_search(elems.begin(), elems.end(), p);
    };
    for (const Perm& p : elems) {
        if (!contains(p.inverse())) {
            throw ValidationError("element set is not closed under inversion");
        }
    }
    const std::size_t count = elems.size();
    if (count <= kFullClosureLimit) {
        for (const Perm& a : elems) {
            for (const Perm& b : elems) {
                if (!contains(a * b)) {
                    throw ValidationError("element set is not closed under composition");
                }
            }
        }
    } else {
        // sampled closure: a deterministic stride of left factors against all
        std::size_t stride = count / 64 + 1;
        for (std::size_t ia = 0; ia < count; ia += stride) {
            for (const Perm& b : elems) {
                if (!contains(elems[ia] * b)) {
                    throw ValidationError("element set is not closed under composition");
                }
            }
        }
    }
    return PermGroup(n, std::move(elems));
}

PermGroup PermGroup::trivial(int n) { return PermGroup(n, {Perm::identity(n)}); }

PermGroup PermGroup::symmetric(int n) {
    if (n < 1 || n > 10) throw CapExceededError("explicit S_n limited to n <= 10");
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    std::vector<Perm> elems;
    do {
        elems.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return PermGroup(n, std::move(elems)); // lex order by construction
}

PermGroup PermGroup::block_symmetric(const BlockPartition& blocks) {
    const int n = blocks.degree();
    std::uint64_t total = 1;
    for (const auto& b : blocks.blocks) {
        for (std::uint64_t k = 2; k <= b.size(); ++k) {
            total *= k;
            if (total > (1ull << 20)) {
                throw CapExceededError("block symmetric group too large to enumerate");
            }
        }
    }
    std::vector<Perm> elems;
    elems.reserve(total);
    std::vector<int> img(n);
    // odometer over per-block permutations
    std::vector<std::vector<int>> arr;
    for (const auto& b : blocks.blocks) arr.push_back(b);
    auto emit = [&]() {
        for (std::size_t w = 0; w < arr.size(); ++w) {
            const auto& b = blocks.blocks[w];
            for (std::size_t k = 0; k < b.size(); ++k) img[b[k] - 1] = arr[w][k];
        }
        elems.emplace_back(img);
    };
    // iterate the cartesian product of next_permutation sequences
    std::size_t w = arr.size();
    emit();
    while (true) {
        std::size_t j = 0;
        while (j < w && !std::next_permutation(arr[j].begin(), arr[j].end())) ++j;
        if (j == w) break;
        emit();
    }
    std::sort(elems.begin(), elems.end());
    return PermGroup(n, std::move(elems));
}

bool PermGroup::contains(const Perm& p) const {
    return std::binary_search(elems_.begin(), elems_.end(), p);
}

std::vector<Perm> PermGroup::generators() const {
    std::vector<Perm> gens;
    ImageSet closure;
    closure.insert(Perm::identity(n_).images());
    auto regenerate = [&]() {
        closure.clear();
        std::vector<Perm> frontier{Perm::identity(n_)};
        closure.insert(frontier.front().images());
        while (!frontier.empty()) {
            std::vector<Perm> next;
            for (const Perm& f : frontier) {
                for (const Perm& g : gens) {
                    Perm prod = f * g;
                    if (closure.insert(prod.images()).second) next.push_back(std::move(prod));
                }
            }
            frontier = std::move(next);
        }
    };
    for (const Perm& g : elems_) {
        if (g.is_identity()) continue;
        if (closure.count(g.images())) continue;
        gens.push_back(g);
        regenerate();
        if (closure.size() == elems_.size()) break;
    }
    return gens;
}

bool PermGroup::is_abelian() const {
    auto gens = generators();
    for (std::size_t a = 0; a < gens.size(); ++a) {
        for (std::size_t b = a + 1; b < gens.size(); ++b) {
            if (!(gens[a] * gens[b] == gens[b] * gens[a])) return false;
        }
    }
    return true;
}

bool is_compatible(const QMatrix& q, const Perm& pi) {
    const int n = q.size();
    if (pi.degree() != n) throw ValidationError("permutation degree does not match q");
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (q.label(pi(i), pi(j)) != q.label(i, j)) return false;
        }
    }
    return true;
}

namespace {

// One integer per row such that rows share an id exactly when their sorted
// label multisets agree; only such rows can be exchanged by a compatible
// permutation.
std::vector<int> row_signature_ids(const QMatrix& q) {
    const int n = q.size();
    std::vector<int> sig(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sig[i * n + j] = q.label(i + 1, j + 1);
        std::sort(sig.begin() + i * n, sig.begin() + (i + 1) * n);
    }
    auto row = [&sig, n](int i) {
        return std::make_pair(sig.begin() + i * n, sig.begin() + (i + 1) * n);
    };
    auto row_less = [&row](int a, int b) {
        auto [ab, ae] = row(a);
        auto [bb, be] = row(b);
        return std::lexicographical_compare(ab, ae, bb, be);
    };
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), row_less);
    std::vector<int> id(n, 0);
    int next = 0;
    for (int k = 1; k < n; ++k) {
        if (row_less(order[k - 1], order[k])) ++next;
        id[order[k]] = next;
    }
    return id;
}

// Below this dimension, building the signature table costs more than the
// whole prefix-pruned search, so the searcher runs without it.
constexpr int kSignatureMinDegree = 9;

struct PrunedSearcher {
    const QMatrix& q;
    int n; // <= 64 so the used set fits one machine word
    std::vector<int> sig_id; // empty = prefix pruning only

    // prefix holds the images of 1..k-1; v is the proposed image of k
    bool candidate_ok(const int* prefix, int k, int v) const {
        if (!sig_id.empty() && sig_id[v - 1] != sig_id[k - 1]) return false;
        for (int a = 1; a < k; ++a) {
            if (q.label(prefix[a - 1], v) != q.label(a, k)) return false;
            if (q.label(v, prefix[a - 1]) != q.label(k, a)) return false;
        }
        return true;
    }

    void extend(std::vector<int>& prefix, std::uint64_t used,
                std::vector<Perm>& out) const {
        const int k = static_cast<int>(prefix.size()) + 1;
        if (k > n) {
            out.emplace_back(prefix);
            return;
        }
        for (int v = 1; v <= n; ++v) {
            if ((used >> (v - 1)) & 1u) continue;
            if (!candidate_ok(prefix.data(), k, v)) continue;
            prefix.push_back(v);
            extend(prefix, used | (1ull << (v - 1)), out);
            prefix.pop_back();
        }
    }
};

std::vector<Perm> compatible_naive(const QMatrix& q) {
    const int n = q.size();
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    std::vector<Perm> out;
    do {
        bool ok = true;
        for (int i = 1; i <= n && ok; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (q.label(img[i - 1], img[j - 1]) != q.label(i, j)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

std::vector<Perm> compatible_pruned(const QMatrix& q, int workers) {
    const int n = q.size();
    PrunedSearcher searcher{
        q, n, n >= kSignatureMinDegree ? row_signature_ids(q) : std::vector<int>{}};
    // Depth-first search trying candidates in ascending order emits the
    // solutions in lexicographic order, so no final sort is needed.
    if (workers <= 1) {
        std::vector<Perm> out;
        std::vector<int> prefix;
        prefix.reserve(n);
        searcher.extend(prefix, 0, out);
        return out;
    }
    std::vector<int> top;
    for (int v = 1; v <= n; ++v) {
        if (searcher.candidate_ok(nullptr, 1, v)) top.push_back(v);
    }
    std::vector<std::vector<Perm>> branch(top.size());
    auto run_branch = [&](std::size_t b) {
        std::vector<int> prefix{top[b]};
        prefix.reserve(n);
        searcher.extend(prefix, 1ull << (top[b] - 1), branch[b]);
    };
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    int nthreads = std::min<int>(workers, static_cast<int>(top.size()));
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t b = cursor.fetch_add(1); b < top.size();
                 b = cursor.fetch_add(1)) {
                run_branch(b);
            }
        });
    }
    for (auto& th : pool) th.join();
    std::vector<Perm> out;
    // branches are indexed by ascending first image, so concatenation of the
    // per-branch sorted outputs stays sorted
    for (auto& part : branch) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace

PermGroup compatible_group(const QMatrix& q, Engine engine, const SearchOptions& opts) {
    const int n = q.size();
    if (engine == Engine::naive && n > opts.naive_cap) {
        throw CapExceededError("dimension " + std::to_string(n) +
                               " exceeds naive search cap " + std::to_string(opts.naive_cap));
    }
    if (engine == Engine::pruned && n > opts.pruned_cap) {
        throw CapExceededError("dimension " + std::to_string(n) +
                               " exceeds pruned search cap " + std::to_string(opts.pruned_cap));
    }
    if (engine == Engine::pruned && n > 64) {
        throw CapExceededError("pruned engine supports n <= 64");
    }
    std::vector<Perm> elems = engine == Engine::naive
                                  ? compatible_naive(q)
                                  : compatible_pruned(q, opts.workers);
    // Compatibility is preserved by composition and inversion and holds for
    // the identity, so the full solution set is a group by construction;
    // both engines emit it already sorted and duplicate-free.
    return PermGroup(n, std::move(elems));
}

PermGroup invariant_subgroup(const QMatrix& q, const PermGroup& p,
                             const BlockPartition& blocks) {
    if (p.degree() != q.size() || blocks.degree() != q.size()) {
        throw ValidationError("invariant_subgroup inputs disagree on dimension");
    }
    std::vector<Perm> elems;
    for (const Perm& pi : p.elements()) {
        bool invariant = true;
        for (int i = 1; i <= q.size(); ++i) {
            if (blocks.block_index(pi(i)) != blocks.block_index(i)) {
                invariant = false;
                break;
            }
        }
        if (invariant) elems.push_back(pi);
    }
    // Block preservation is multiplicative and inverse-stable, so this
    // filter of a group is a subgroup; the sorted order is inherited.
    return PermGroup(q.size(), std::move(elems));
}

CosetList quotient_cosets(const PermGroup& p, const PermGroup& i) {
    if (p.degree() != i.degree()) throw ValidationError("coset degree mismatch");
    for (const Perm& g : i.elements()) {
        if (!p.contains(g)) {
            throw ValidationError("subgroup is not contained in the parent group");
        }
    }
    // normality via generator conjugation
    auto pg = p.generators();
    auto ig = i.generators();
    for (const Perm& s : pg) {
        Perm sinv = s.inverse();
        for (const Perm& g : ig) {
            if (!i.contains(sinv * g * s)) {
                throw ValidationError("subgroup is not normal in the parent group");
            }
        }
    }
    const auto& elems = p.elements();
    std::vector<bool> assigned(elems.size(), false);
    std::vector<Perm> reps;
    for (std::size_t k = 0; k < elems.size(); ++k) {
        if (assigned[k]) continue;
        reps.push_back(elems[k]); // first unassigned in sorted order = lex least
        for (const Perm& g : i.elements()) {
            Perm member = elems[k] * g;
            auto it = std::lower_bound(elems.begin(), elems.end(), member);
            assigned[static_cast<std::size_t>(it - elems.begin())] = true;
        }
    }
    return CosetList{i, std::move(reps)};
}

Perm coset_min(const Perm& g, const PermGroup& i) {
    Perm best = g;
    for (const Perm& x : i.elements()) {
        Perm cand = g * x;
        if (cand < best) best = cand;
    }
    return best;
}

Perm block_coset_min(const Perm& g, const BlockPartition& blocks) {
    const int n = g.degree();
    if (blocks.degree() != n) throw ValidationError("block partition degree mismatch");
    std::vector<bool> used(n, false);
    std::vector<int> img(n);
    for (int i = 1; i <= n; ++i) {
        int best = 0;
        for (int b : blocks.blocks[blocks.block_index(i)]) {
            if (used[b - 1]) continue;
            if (best == 0 || g(b) < g(best)) best = b;
        }
        used[best - 1] = true;
        img[i - 1] = g(best);
    }
    return Perm(std::move(img));
}

namespace {

// Multiplication table of a small group over element indices 0..k-1,
// index 0 being the identity.
struct MulTable {
    std::size_t k = 0;
    std::vector<std::size_t> t;
    std::size_t mul(std::size_t a, std::size_t b) const { return t[a * k + b]; }
};

std::vector<std::size_t> table_element_orders(const MulTable& m) {
    std::vector<std::size_t> orders(m.k);
    for (std::size_t a = 0; a < m.k; ++a) {
        std::size_t x = a, ord = 1;
        while (x != 0) {
            x = m.mul(x, a);
            ++ord;
        }
        orders[a] = ord;
    }
    return orders;
}

bool table_abelian(const MulTable& m) {
    for (std::size_t a = 0; a < m.k; ++a) {
        for (std::size_t b = a + 1; b < m.k; ++b) {
            if (m.mul(a, b) != m.mul(b, a)) return false;
        }
    }
    return true;
}

std::string classify_small(std::size_t order, bool abelian,
                           const std::vector<std::size_t>& orders) {
    std::size_t max_order = *std::max_element(orders.begin(), orders.end());
    std::size_t involutions =
        static_cast<std::size_t>(std::count(orders.begin(), orders.end(), 2u));
    switch (order) {
        case 1: return "C_1";
        case 2: return "C_2";
        case 3: return "C_3";
        case 4: return max_order == 4 ? "C_4" : "C_2²";
        case 5: return "C_5";
        case 6: return abelian ? "C_6" : "S_3";
        case 7: return "C_7";
        case 8:
            if (abelian) {
                if (max_order == 8) return "C_8";
                return max_order == 4 ? "C_4×C_2" : "C_2³";
            }
            return involutions == 5 ? "D_8 (dihedral of order 8)" : "Q_8";
        default: return "group of order " + std::to_string(order);
    }
}

} // namespace

GroupName identify_small_group(const PermGroup& g) {
    if (g.order() > 8) {
        return GroupName{"group of order " + std::to_string(g.order()), g.order(),
                         g.generators()};
    }
    const auto& elems = g.elements();
    MulTable table;
    table.k = elems.size();
    table.t.assign(table.k * table.k, 0);
    for (std::size_t a = 0; a < table.k; ++a) {
        for (std::size_t b = 0; b < table.k; ++b) {
            Perm prod = elems[a] * elems[b];
            auto it = std::lower_bound(elems.begin(), elems.end(), prod);
            table.t[a * table.k + b] = static_cast<std::size_t>(it - elems.begin());
        }
    }
    return GroupName{classify_small(table.k, table_abelian(table),
                                    table_element_orders(table)),
                     table.k,
                     {}};
}

GroupName identify_quotient(const CosetList& cosets) {
    const auto& reps = cosets.representatives;
    const std::size_t k = reps.size();
    MulTable table;
    table.k = k;
    table.t.assign(k * k, 0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            Perm prod = coset_min(reps[a] * reps[b], cosets.subgroup);
            auto it = std::lower_bound(reps.begin(), reps.end(), prod);
            if (it == reps.end() || !(*it == prod)) {
                throw ValidationError("coset representatives are not closed");
            }
            table.t[a * k + b] = static_cast<std::size_t>(it - reps.begin());
        }
    }
    if (k > 8) {
        // greedy generating set over the quotient table
        std::vector<std::size_t> gens;
        std::vector<bool> closure(k, false);
        closure[0] = true;
        std::size_t covered = 1;
        for (std::size_t cand = 1; cand < k && covered < k; ++cand) {
            if (closure[cand]) continue;
            gens.push_back(cand);
            std::vector<std::size_t> frontier{0};
            std::vector<bool> fresh(k, false);
            fresh[0] = true;
            while (!frontier.empty()) {
                std::vector<std::size_t> next;
                for (std::size_t f : frontier) {
                    for (std::size_t g : gens) {
                        std::size_t prod = table.mul(f, g);
                        if (!fresh[prod]) {
                            fresh[prod] = true;
                            next.push_back(prod);
                        }
                    }
                }
                frontier = std::move(next);
            }
            closure = fresh;
            covered = static_cast<std::size_t>(std::count(closure.begin(), closure.end(), true));
        }
        std::vector<Perm> gen_perms;
        for (std::size_t g : gens) gen_perms.push_back(reps[g]);
        return GroupName{"group of order " + std::to_string(k), k, std::move(gen_perms)};
    }
    return GroupName{classify_small(k, table_abelian(table), table_element_orders(table)),
                     k,
                     {}};
}

} // namespace qspace

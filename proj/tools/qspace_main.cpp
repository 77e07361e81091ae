#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qspace/errors.hpp"
#include "qspace/membership.hpp"
#include "qspace/perm.hpp"
#include "qspace/report.hpp"
#include "qspace/skewpoly.hpp"

namespace {

using namespace qspace;

int env_workers() {
    const char* env = std::getenv("QSPACE_WORKERS");
    if (!env) return 1;
    int w = std::atoi(env);
    return w >= 1 && w <= 64 ? w : 1;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct BenchSample {
    double ms;
    std::uint64_t order;
    bool projected;
};

BenchSample bench_engine(const QMatrix& q, Engine engine, const SearchOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t order = 0;
    int reps = 0;
    double total;
    do {
        order = compatible_group(q, engine, opts).order();
        ++reps;
        total = ms_since(t0);
    } while (total < 200.0 && reps < 2000);
    return BenchSample{total / reps, order, false};
}

// the idx-th permutation of {1,...,n} in lexicographic order (0-based idx)
std::vector<int> nth_permutation(int n, std::uint64_t idx) {
    std::vector<std::uint64_t> fact(static_cast<std::size_t>(n), 1);
    for (int k = 1; k < n; ++k) fact[k] = fact[k - 1] * static_cast<std::uint64_t>(k);
    std::vector<int> avail(n);
    std::iota(avail.begin(), avail.end(), 1);
    std::vector<int> img;
    img.reserve(n);
    for (int pos = n - 1; pos >= 0; --pos) {
        std::uint64_t f = fact[pos];
        auto d = static_cast<std::ptrdiff_t>(idx / f);
        idx %= f;
        img.push_back(avail[static_cast<std::size_t>(d)]);
        avail.erase(avail.begin() + d);
    }
    return img;
}

// time the full compatibility check over `sample` permutations drawn from
// evenly strided windows of the lexicographic order (so cheap-to-reject and
// expensive-to-reject regions are both represented), extrapolated to all n!
BenchSample bench_naive_projected(const QMatrix& q, std::uint64_t sample) {
    const int n = q.size();
    std::uint64_t total = 1;
    for (int k = 2; k <= n; ++k) total *= static_cast<std::uint64_t>(k);
    const std::uint64_t windows = 8;
    const std::uint64_t per_window = sample / windows;
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t scanned = 0, hits = 0;
    for (std::uint64_t w = 0; w < windows; ++w) {
        std::vector<int> img = nth_permutation(n, total / windows * w);
        std::uint64_t count = 0;
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
            if (ok) ++hits;
            ++scanned;
            ++count;
        } while (count < per_window && std::next_permutation(img.begin(), img.end()));
    }
    double elapsed = ms_since(t0);
    double factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    return BenchSample{elapsed * (factorial / static_cast<double>(scanned)), hits, true};
}

void emit(const std::string& format, const nlohmann::json& j, const std::string& text) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

int cmd_analyze(const std::string& qfile, const std::string& engine_name, int cap,
                int workers, const std::string& format) {
    QMatrix q = QMatrix::load(qfile);
    SearchOptions opts;
    opts.workers = workers;
    if (cap > 0) {
        opts.naive_cap = cap;
        opts.pruned_cap = cap;
    }
    Engine engine = engine_name == "naive" ? Engine::naive : Engine::pruned;
    AutReport report = analyze(q, engine, opts);
    emit(format, report.to_json(), report.text());
    return 0;
}

int cmd_check(const std::string& qfile, const std::string& mfile, bool explain,
              const std::string& format) {
    QMatrix q = QMatrix::load(qfile);
    FieldMatrix m = FieldMatrix::load(mfile);
    auto witness = member_violation(q, m);
    bool invertible = m.is_invertible();
    bool member = invertible && !witness;

    nlohmann::json j{{"member", member}};
    std::string text = member ? "MEMBER\n" : "NON-MEMBER\n";
    if (!member) {
        std::string reason = witness ? "quadruple (" + std::to_string(witness->i) + "," +
                                           std::to_string(witness->j) + "," +
                                           std::to_string(witness->s) + "," +
                                           std::to_string(witness->t) + ") violated"
                                     : "not invertible";
        j["reason"] = reason;
        if (explain) text += "reason    : " + reason + "\n";
    } else if (explain) {
        auto blocks = block_decomposition(q);
        auto dec = decompose_member(q, blocks, m);
        j["sigma"] = dec.sigma.cycles();
        j["block_part"] = dec.block_part.to_json();
        text += "sigma     : " + dec.sigma.cycles() + "\n";
        text += "block part: " + dec.block_part.str() + "\n";
    }
    emit(format, j, text);
    return member ? 0 : 1;
}

int cmd_skeleton(const std::string& mfile, bool all, std::uint64_t cap,
                 const std::string& format) {
    FieldMatrix m = FieldMatrix::load(mfile);
    if (all) {
        auto skels = skeleton_all(m, cap);
        nlohmann::json arr = nlohmann::json::array();
        std::string text;
        for (const Perm& p : skels) {
            arr.push_back(p.cycles());
            if (!text.empty()) text += ", ";
            text += p.cycles();
        }
        emit(format, nlohmann::json{{"skeletons", arr}}, text + "\n");
        return skels.empty() ? 1 : 0;
    }
    auto skel = skeleton_any(m);
    if (!skel) {
        emit(format, nlohmann::json{{"skeleton", nullptr}}, "none\n");
        return 1;
    }
    emit(format, nlohmann::json{{"skeleton", skel->cycles()}}, skel->cycles() + "\n");
    return 0;
}

int cmd_census(const std::string& qfile, std::uint64_t prime, std::uint64_t budget,
               int workers, const std::string& format) {
    QMatrix q = QMatrix::load(qfile);
    std::uint64_t p = prime;
    if (p == 0) {
        if (!q.field().is_prime_field()) {
            throw ValidationError("census needs a finite field: pass --prime");
        }
        p = q.field().modulus();
    }
    CensusResult result = census(q, p, budget, workers);
    std::string text;
    text += "p         : " + std::to_string(result.p) + "\n";
    text += "enumerated: " + std::to_string(result.total) + "\n";
    text += "counted   : " + std::to_string(result.counted) + "\n";
    text += "predicted : " + std::to_string(result.predicted) + "\n";
    text += std::string("verdict   : ") + (result.match() ? "match" : "MISMATCH") + "\n";
    emit(format, result.to_json(), text);
    return result.match() ? 0 : 1;
}

int cmd_verify(const std::string& qfile, int samples, std::uint64_t seed, int workers,
               const std::string& format) {
    QMatrix q = QMatrix::load(qfile);
    SearchOptions opts;
    opts.workers = workers;
    auto blocks = block_decomposition(q);
    PermGroup p = compatible_group(q, Engine::pruned, opts);
    PermGroup inv = invariant_subgroup(q, p, blocks);

    std::vector<std::pair<std::string, bool>> results;
    auto record = [&](const std::string& name, bool ok) { results.emplace_back(name, ok); };

    // engine agreement
    if (q.size() <= opts.naive_cap) {
        PermGroup p2 = compatible_group(q, Engine::naive, opts);
        record("engine agreement (naive vs pruned)", p.elements() == p2.elements());
    }

    // normality (quotient_cosets validates it)
    bool normal = true;
    try {
        quotient_cosets(p, inv);
    } catch (const ValidationError&) {
        normal = false;
    }
    record("invariant subgroup normal in compatible group", normal);

    // every compatible permutation must send each block onto a block
    bool blocks_ok = true;
    for (const Perm& pi : p.elements()) {
        for (std::size_t w = 0; w < blocks.count() && blocks_ok; ++w) {
            std::size_t target = blocks.block_index(pi(blocks.blocks[w][0]));
            for (int member : blocks.blocks[w]) {
                if (blocks.block_index(pi(member)) != target) {
                    blocks_ok = false;
                    break;
                }
            }
            if (blocks.blocks[target].size() != blocks.blocks[w].size()) blocks_ok = false;
        }
    }
    record("compatible permutations map blocks onto blocks", blocks_ok);

    // permutation matrices are members: exhaustive for small groups, strided
    // sample for large ones (each check costs an n^3 invertibility test)
    bool perm_members = true;
    {
        const auto& elems = p.elements();
        const auto target = std::max<std::size_t>(static_cast<std::size_t>(samples), 512);
        const std::size_t stride = std::max<std::size_t>(1, elems.size() / target);
        for (std::size_t k = 0; k < elems.size(); k += stride) {
            if (!is_member(q, permutation_matrix(elems[k], q.field()))) {
                perm_members = false;
                break;
            }
        }
    }
    record("permutation matrices of compatible permutations are members", perm_members);

    MemberSampler sampler(q, blocks, p, seed);
    bool oracle_ok = true, transpose_ok = true, closure_ok = true, skel_ok = true;
    bool roundtrip_ok = true, welldef_ok = true, greedy_ok = true;
    for (int s = 0; s < samples; ++s) {
        FieldMatrix m = sampler.next();
        FieldMatrix r = sampler.random_matrix();
        // oracle equivalence on both a member and an unconstrained matrix
        if (is_member(q, m) != (m.is_invertible() && relations_preserved(q, m))) {
            oracle_ok = false;
        }
        if (is_member(q, r) != (r.is_invertible() && relations_preserved(q, r))) {
            oracle_ok = false;
        }
        if (!is_member(q, m.transpose())) transpose_ok = false;
        FieldMatrix w = sampler.next();
        if (!is_member(q, m * w) || !is_member(q, m.inverse())) closure_ok = false;
        auto skels = skeleton_all(m);
        Perm rep = block_coset_min(skels.front(), blocks);
        if (!(coset_min(skels.front(), inv) == rep)) greedy_ok = false;
        for (const Perm& pi : skels) {
            if (!p.contains(pi)) skel_ok = false;
            if (!(block_coset_min(pi, blocks) == rep)) welldef_ok = false;
        }
        auto dec = decompose_member(q, blocks, m);
        if (!(permutation_matrix(dec.sigma, q.field()) * dec.block_part == m) ||
            !is_block_member(blocks, dec.block_part) || !p.contains(dec.sigma)) {
            roundtrip_ok = false;
        }
    }
    record("membership criterion agrees with the relation-preservation oracle", oracle_ok);
    record("transpose closure on sampled members", transpose_ok);
    record("product and inverse closure on sampled members", closure_ok);
    record("skeletons of sampled members are compatible", skel_ok);
    record("skeleton coset independent of skeleton choice", welldef_ok);
    record("greedy block-coset minimum agrees with subgroup scan", greedy_ok);
    record("decomposition round-trip on sampled members", roundtrip_ok);
    record("skeleton coset map is a homomorphism",
           skeleton_coset_homomorphism(q, blocks, p, inv, samples, seed + 1));

    bool all_pass = true;
    std::string text;
    text += "seed      : " + std::to_string(seed) + "\n";
    text += "samples   : " + std::to_string(samples) + "\n";
    nlohmann::json props = nlohmann::json::object();
    for (const auto& [name, ok] : results) {
        all_pass = all_pass && ok;
        text += std::string(ok ? "PASS " : "FAIL ") + name + "\n";
        props[name] = ok;
    }
    text += std::string("verdict   : ") +
            (all_pass ? "all properties hold" : "PROPERTY FAILURE") + "\n";
    emit(format,
         nlohmann::json{{"seed", seed},
                        {"samples", samples},
                        {"properties", props},
                        {"all_pass", all_pass}},
         text);
    return all_pass ? 0 : 1;
}

int cmd_bench(const std::string& qfile, const std::string& engine_name, int workers,
              const std::string& format) {
    QMatrix q = QMatrix::load(qfile);
    SearchOptions opts;
    opts.workers = workers;
    opts.pruned_cap = 14;
    opts.naive_cap = 14;
    bool want_pruned = engine_name != "naive";
    bool want_naive = engine_name != "pruned";
    nlohmann::json j;
    std::string text;
    double pruned_ms = 0, naive_ms = 0;
    if (want_pruned) {
        BenchSample s = bench_engine(q, Engine::pruned, opts);
        pruned_ms = s.ms;
        j["pruned_ms"] = s.ms;
        j["order"] = s.order;
        text += "pruned    : " + std::to_string(s.ms) + " ms   |P_q| = " +
                std::to_string(s.order) + "\n";
    }
    if (want_naive) {
        BenchSample s = q.size() <= 8 ? bench_engine(q, Engine::naive, opts)
                                      : bench_naive_projected(q, 2000000);
        naive_ms = s.ms;
        j["naive_ms"] = s.ms;
        j["naive_projected"] = s.projected;
        text += "naive     : " + std::to_string(s.ms) + " ms";
        if (s.projected) text += "   (projected from a 2000000-permutation sample)";
        text += "\n";
    }
    if (want_pruned && want_naive && pruned_ms > 0) {
        double speedup = naive_ms / pruned_ms;
        j["speedup"] = speedup;
        text += "speedup   : " + std::to_string(speedup) + "x\n";
    }
    emit(format, j, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded automorphism group structure of multiparameter quantum affine space"};
    app.require_subcommand(1);

    std::string format = "text";
    int workers = env_workers();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--workers", workers, "worker thread count")
        ->check(CLI::Range(1, 64));

    auto* analyze_cmd = app.add_subcommand("analyze", "full structure report for a q-matrix");
    std::string a_qfile, a_engine = "pruned";
    int a_cap = 0;
    analyze_cmd->add_option("qfile", a_qfile, "q-matrix JSON file")->required();
    analyze_cmd->add_option("--engine", a_engine, "search engine")
        ->check(CLI::IsMember({"naive", "pruned"}));
    analyze_cmd->add_option("--cap", a_cap, "max dimension for the search");

    auto* check_cmd = app.add_subcommand("check", "test a matrix for membership");
    std::string c_qfile, c_mfile;
    bool c_explain = false;
    check_cmd->add_option("qfile", c_qfile, "q-matrix JSON file")->required();
    check_cmd->add_option("mfile", c_mfile, "matrix JSON file")->required();
    check_cmd->add_flag("--explain", c_explain, "print witness quadruple or decomposition");

    auto* skel_cmd = app.add_subcommand("skeleton", "skeleton permutations of a matrix");
    std::string s_mfile;
    bool s_all = false;
    std::uint64_t s_cap = 1000000;
    skel_cmd->add_option("mfile", s_mfile, "matrix JSON file")->required();
    skel_cmd->add_flag("--all", s_all, "enumerate every skeleton");
    skel_cmd->add_option("--cap", s_cap, "skeleton enumeration cap");

    auto* census_cmd = app.add_subcommand("census", "brute-force member count over F_p");
    std::string n_qfile;
    std::uint64_t n_prime = 0, n_budget = kDefaultCensusBudget;
    census_cmd->add_option("qfile", n_qfile, "q-matrix JSON file")->required();
    census_cmd->add_option("--prime", n_prime,
                           "coefficient prime (defaults to the q-matrix field)");
    census_cmd->add_option("--budget", n_budget, "max matrices to enumerate");

    auto* verify_cmd = app.add_subcommand("verify", "property sweep on a q-matrix");
    std::string v_qfile;
    int v_samples = 1000;
    std::uint64_t v_seed = 12345;
    verify_cmd->add_option("qfile", v_qfile, "q-matrix JSON file")->required();
    verify_cmd->add_option("--samples", v_samples, "sampled members per property")
        ->check(CLI::Range(1, 1000000));
    verify_cmd->add_option("--seed", v_seed, "rng seed");

    auto* bench_cmd = app.add_subcommand("bench", "time the search engines");
    std::string b_qfile, b_engine = "both";
    bench_cmd->add_option("qfile", b_qfile, "q-matrix JSON file")->required();
    bench_cmd->add_option("--engine", b_engine, "engine to time")
        ->check(CLI::IsMember({"naive", "pruned", "both"}));

    // --format/--workers are accepted either before or after the subcommand
    for (auto* sub : {analyze_cmd, check_cmd, skel_cmd, census_cmd, verify_cmd, bench_cmd}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) {
            return cmd_analyze(a_qfile, a_engine, a_cap, workers, format);
        }
        if (app.got_subcommand(check_cmd)) {
            return cmd_check(c_qfile, c_mfile, c_explain, format);
        }
        if (app.got_subcommand(skel_cmd)) {
            return cmd_skeleton(s_mfile, s_all, s_cap, format);
        }
        if (app.got_subcommand(census_cmd)) {
            return cmd_census(n_qfile, n_prime, n_budget, workers, format);
        }
        if (app.got_subcommand(verify_cmd)) {
            return cmd_verify(v_qfile, v_samples, v_seed, workers, format);
        }
        if (app.got_subcommand(bench_cmd)) {
            return cmd_bench(b_qfile, b_engine, workers, format);
        }
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

// Command-line front end: orthomorphism searches, partition solvers,
// family builders, absorber and RMBG verification, Monte Carlo probes, and
// independent certificate verification.
//
// Exit codes: 0 success/Found, 1 verified Nonexistent (or a false
// predicate / failed verification), 2 Unknown under budget, 64 usage.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ortho/absorbers.hpp"
#include "ortho/certificate.hpp"
#include "ortho/families.hpp"
#include "ortho/group.hpp"
#include "ortho/patterns.hpp"
#include "ortho/rainbow.hpp"
#include "ortho/sequence.hpp"
#include "ortho/solver.hpp"
#include "ortho/words.hpp"
#include "ortho/zerosum.hpp"

namespace {

using ortho::Json;

constexpr int kExitFound = 0;
constexpr int kExitNonexistent = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::uint64_t budget_nodes = 100'000'000;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out, "write output to a file instead of stdout");
    cmd->add_option("--format", opts.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opts.seed, "random seed (default 0, fully deterministic)");
    cmd->add_option("--budget-nodes", opts.budget_nodes, "node cap for exact searches");
    cmd->add_option("--jobs", opts.jobs, "worker count (default 1, reproducible)");
}

void emit(const CommonOpts& opts, const std::string& payload) {
    if (opts.out.empty()) {
        std::cout << payload << "\n";
    } else {
        std::ofstream f(opts.out);
        if (!f) throw ortho::DomainError("cannot open output file: " + opts.out);
        f << payload << "\n";
    }
}

void emit_json(const CommonOpts& opts, const Json& j) { emit(opts, j.dump(2)); }

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

int status_exit(ortho::SearchStatus s) {
    switch (s) {
        case ortho::SearchStatus::Found: return kExitFound;
        case ortho::SearchStatus::Nonexistent: return kExitNonexistent;
        case ortho::SearchStatus::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

int run_fgt(const std::string& group_spec, int k, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    auto r = ortho::find_fgt_orthomorphism(g, k, ortho::SearchBudget::nodes(opts.budget_nodes));
    Json j;
    if (r.result.found()) {
        j = ortho::orthomorphism_certificate(*r.result.value, opts.seed, r.factor);
    } else {
        j["kind"] = "orthomorphism";
        j["group"] = g.render();
        j["status"] = ortho::to_string(r.result.status);
        if (!r.result.reason.empty()) j["reason"] = r.result.reason;
    }
    j["k"] = k;
    j["nodes"] = r.result.nodes;
    emit_json(opts, j);
    return status_exit(r.result.status);
}

int run_cycle_type(const std::string& group_spec, const std::string& type_str,
                   const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    ortho::CycleType t = ortho::CycleType::parse(type_str);
    auto r =
        ortho::find_cycle_type_orthomorphism(g, t, ortho::SearchBudget::nodes(opts.budget_nodes));
    Json j;
    if (r.result.found()) {
        j = ortho::orthomorphism_certificate(*r.result.value, opts.seed, r.factor);
    } else {
        j["kind"] = "orthomorphism";
        j["group"] = g.render();
        j["status"] = ortho::to_string(r.result.status);
        if (!r.result.reason.empty()) j["reason"] = r.result.reason;
        j["cycle_type"] = t.render();
    }
    j["nodes"] = r.result.nodes;
    emit_json(opts, j);
    return status_exit(r.result.status);
}

int run_hall_paige(const std::string& group_spec, int order, const CommonOpts& opts) {
    if (!group_spec.empty()) {
        ortho::Group g = ortho::parse_group(group_spec);
        bool hp = ortho::hall_paige(g);
        Json j;
        j["group"] = g.render();
        j["hall_paige"] = hp;
        emit_json(opts, j);
        return hp ? kExitFound : kExitNonexistent;
    }
    Json arr = Json::array();
    bool all = true;
    for (const auto& g : ortho::enumerate_abelian_groups(order)) {
        bool hp = ortho::hall_paige(g);
        all = all && hp;
        arr.push_back({{"group", g.render()}, {"hall_paige", hp}});
    }
    emit_json(opts, arr);
    return all ? kExitFound : kExitNonexistent;
}

int run_sweep(int max_order, const CommonOpts& opts) {
    auto report =
        ortho::fgt_sweep(max_order, ortho::SearchBudget::nodes(opts.budget_nodes), opts.jobs);
    if (opts.format == "csv") {
        std::string csv = "group,order,k,status,witness_hash,nodes\n";
        for (const auto& row : report.rows) {
            csv += row.group + ',' + std::to_string(row.order) + ',' + std::to_string(row.k) +
                   ',' + row.status + ',' + row.witness_hash + ',' + std::to_string(row.nodes) +
                   '\n';
        }
        csv.pop_back();
        emit(opts, csv);
    } else {
        Json arr = Json::array();
        for (const auto& row : report.rows)
            arr.push_back({{"group", row.group},
                           {"order", row.order},
                           {"k", row.k},
                           {"status", row.status},
                           {"witness_hash", row.witness_hash},
                           {"nodes", row.nodes}});
        emit_json(opts, arr);
    }
    return report.all_found ? kExitFound : kExitNonexistent;
}

int run_sequence(const std::string& group_spec, const std::string& set_str,
                 const std::string& mode, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    std::vector<int> S = parse_int_list(set_str);
    std::optional<ortho::ColorSequence> seq = mode == "cycle"
                                                  ? ortho::order_as_cycle_candidate(g, S)
                                                  : ortho::order_as_path_candidate(g, S);
    Json j;
    j["kind"] = "sequence";
    j["group"] = g.render();
    j["mode"] = mode;
    j["set"] = S;
    if (seq) {
        j["sequence"] = seq->entries;
        j["render"] = seq->render();
    }
    j["found"] = seq.has_value();
    emit_json(opts, j);
    return seq ? kExitFound : kExitNonexistent;
}

int run_zerosum_partition(const std::string& group_spec, const std::string& set_str, int k,
                          int alpha, const std::string& sizes_str, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    ortho::SearchBudget budget = ortho::SearchBudget::nodes(opts.budget_nodes);

    ortho::SearchResult<ortho::Partition> r;
    if (!sizes_str.empty()) {
        r = ortho::tannenbaum_partition(g, parse_int_list(sizes_str), budget);
    } else {
        std::vector<int> X;
        if (set_str.empty()) {
            for (int x = 1; x < g.order(); ++x) X.push_back(x);
        } else {
            X = parse_int_list(set_str);
        }
        if (alpha != 0)
            r = ortho::partition_fixed_sum_quads(g, X, alpha, budget);
        else
            r = ortho::zero_sum_equipartition(g, X, k, budget);
    }
    Json j;
    if (r.found()) {
        j = ortho::partition_certificate(*r.value, r.value->block_sums());
    } else {
        j["kind"] = "partition";
        j["group"] = g.render();
        j["status"] = ortho::to_string(r.status);
    }
    j["nodes"] = r.nodes;
    emit_json(opts, j);
    return status_exit(r.status);
}

int run_matchable(const std::string& group_spec, const std::string& matrix_str,
                  const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    ortho::EquationSystem A = ortho::EquationSystem::parse(matrix_str);
    auto r = ortho::matchable(A, g, ortho::SearchBudget::nodes(opts.budget_nodes));
    Json j;
    if (r.status == ortho::SearchStatus::Found) {
        j = ortho::matchable_certificate(A, g, r.witness);
    } else {
        j["kind"] = "matchable";
        j["group"] = g.render();
        j["matrix"] = A.rows;
    }
    j["status"] = ortho::to_string(r.status);
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["nodes"] = r.nodes;
    emit_json(opts, j);
    return status_exit(r.status);
}

int run_families(const std::string& group_spec, int k, int count, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    auto built = ortho::build_good_families(g, k, count, opts.seed);
    Json j;
    j["kind"] = "good_families";
    j["group"] = g.render();
    j["k"] = k;
    j["target_count"] = count;
    j["seed"] = opts.seed;
    if (!built.families) {
        j["built"] = false;
        j["stage"] = built.stage;
        emit_json(opts, j);
        return kExitUnknown;
    }
    const auto& fam = *built.families;
    auto rep = ortho::check_good_families(fam, g, k);
    j["built"] = true;
    j["f"] = fam.f;
    j["s"] = fam.s;
    j["z_S"] = fam.z_S;
    j["q"] = fam.q;
    Json F = Json::array();
    for (const auto& t : fam.F) F.push_back(std::vector<int>(t.begin(), t.end()));
    j["F"] = F;
    j["S"] = fam.S;
    j["check"] = {{"disjoint", rep.disjoint},
                  {"p1_f_sums", rep.p1_f_sums},
                  {"p2_s_sums", rep.p2_s_sums},
                  {"p3_s_candidates", rep.p3_s_candidates},
                  {"p4_q", rep.p4_q},
                  {"p5_f_candidates", rep.p5_f_candidates},
                  {"p6_separable", rep.p6_separable},
                  {"pass", rep.pass()}};
    emit_json(opts, j);
    return rep.pass() ? kExitFound : kExitNonexistent;
}

int run_absorber(const std::string& group_spec, int k, int x, int z, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    auto view = ortho::ColoredDigraphView::full(g);
    auto r = ortho::find_pair_absorber(x, z, view, k, ortho::SearchBudget::nodes(opts.budget_nodes));
    Json j;
    j["kind"] = "absorber";
    j["group"] = g.render();
    j["k"] = k;
    j["x"] = x;
    j["z"] = z;
    j["status"] = ortho::to_string(r.status);
    j["nodes"] = r.nodes;
    if (r.found()) {
        j["reservoir"] = {{"vertices", r.value->reservoir.vertices},
                          {"colors", r.value->reservoir.colors}};
        j["reservoir_size"] = r.value->reservoir.size();
        auto verdict = ortho::verify_m_absorbs(*r.value, view, k);
        j["verified"] = verdict.pass();
        j["subfamilies_checked"] = verdict.subfamilies_checked;
    }
    emit_json(opts, j);
    return status_exit(r.status);
}

int run_rmbg(int h, const std::string& beta_str, int samples, int retries,
             const CommonOpts& opts) {
    int num = 1, den = 1;
    auto slash = beta_str.find('/');
    if (slash == std::string::npos) {
        num = std::stoi(beta_str);
    } else {
        num = std::stoi(beta_str.substr(0, slash));
        den = std::stoi(beta_str.substr(slash + 1));
    }
    auto built = ortho::rmbg_build(h, num, den, opts.seed, retries, samples);
    Json j;
    j["kind"] = "rmbg";
    j["h"] = h;
    j["beta"] = beta_str;
    j["seed"] = opts.seed;
    if (!built) {
        j["built"] = false;
        emit_json(opts, j);
        return kExitUnknown;
    }
    auto verdict = ortho::rmbg_verify(*built, samples, ortho::derive_seed(opts.seed, 77));
    j["built"] = true;
    j["x_size"] = built->x_size();
    j["y_size"] = built->y_size();
    j["yp_size"] = built->yp_size();
    j["max_degree"] = built->max_degree();
    j["adjacency"] = built->adj;
    j["verdict"] = {{"pass", verdict.pass},
                    {"exhaustive", verdict.exhaustive},
                    {"subsets_checked", verdict.subsets_checked},
                    {"seed", verdict.seed},
                    {"reason", verdict.reason}};
    emit_json(opts, j);
    return verdict.pass ? kExitFound : kExitNonexistent;
}

int run_probe(const std::string& group_spec, double p, const std::string& pattern_kind,
              const std::string& colors_str, int forbidden_size, int trials,
              const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    ortho::ColorSequence colors{g, parse_int_list(colors_str)};
    ortho::Pattern pattern = pattern_kind == "cycle" ? ortho::make_cycle_pattern(colors)
                                                     : ortho::make_path_pattern(colors);
    auto rep = ortho::probe_gadget_availability(g, p, pattern, forbidden_size, trials, opts.seed);
    Json j;
    j["kind"] = "probe";
    j["group"] = g.render();
    j["pattern"] = pattern_kind;
    j["colors"] = colors.entries;
    j["p"] = p;
    j["forbidden_size"] = forbidden_size;
    j["trials"] = rep.trials;
    j["successes"] = rep.successes;
    j["rate"] = rep.rate();
    j["wilson_low"] = rep.wilson_low();
    j["wilson_high"] = rep.wilson_high();
    j["seed"] = rep.seed;
    j["evidence"] = "monte_carlo";
    emit_json(opts, j);
    return kExitFound;
}

int run_typicality(const std::string& group_spec, const std::string& equation,
                   const std::string& parts_str, double gamma, double p, const CommonOpts& opts) {
    ortho::Group g = ortho::parse_group(group_spec);
    // equation literal: three signed letters, e.g. "+a+b+c" or "a-b-c"
    ortho::TripartiteEquation eq;
    int idx = 0;
    int sign = 1;
    for (char ch : equation) {
        if (ch == '+' || ch == ' ') {
            sign = ch == '+' ? 1 : sign;
        } else if (ch == '-') {
            sign = -1;
        } else if (ch == 'a' || ch == 'b' || ch == 'c') {
            (idx == 0 ? eq.sign_a : idx == 1 ? eq.sign_b : eq.sign_c) = sign;
            sign = 1;
            ++idx;
        } else {
            throw ortho::DomainError("bad equation literal: '" + equation + "'");
        }
    }
    if (idx != 3) throw ortho::DomainError("equation needs exactly three terms");

    std::vector<std::vector<int>> parts;
    if (parts_str.empty()) {
        std::vector<int> full(g.order());
        for (int i = 0; i < g.order(); ++i) full[i] = i;
        parts = {full, full, full};
    } else {
        std::stringstream ss(parts_str);
        std::string item;
        while (std::getline(ss, item, ';')) parts.push_back(parse_int_list(item));
        if (parts.size() != 3) throw ortho::DomainError("--parts needs three ;-separated lists");
    }
    auto rep = ortho::typicality_stats(g, eq, parts[0], parts[1], parts[2], gamma, p);
    Json j;
    j["kind"] = "typicality";
    j["group"] = g.render();
    j["equation"] = equation;
    j["part_sizes"] = rep.part_sizes;
    j["min_degree"] = rep.min_degree;
    j["max_degree"] = rep.max_degree;
    j["min_pair_degree"] = rep.min_pair_degree;
    j["max_pair_degree"] = rep.max_pair_degree;
    j["gamma"] = gamma;
    j["p"] = p;
    j["typical"] = rep.verdict;
    emit_json(opts, j);
    return rep.verdict ? kExitFound : kExitNonexistent;
}

int run_verify(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open certificate file: " << path << "\n";
        return kExitUsage;
    }
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        std::cerr << "certificate is not valid JSON: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        auto verdict = ortho::verify_certificate(j);
        if (verdict.ok) {
            std::cout << "{\"verified\":true}\n";
            return kExitFound;
        }
        std::cout << "{\"verified\":false,\"reason\":\"" << verdict.reason << "\"}\n";
        return kExitNonexistent;
    } catch (const Json::exception& e) {
        std::cerr << "certificate schema violation: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ortho::DomainError& e) {
        std::cerr << "certificate schema violation: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthomorphism and rainbow cycle factor toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string group_spec, set_str, sizes_str, matrix_str, type_str, beta_str = "1/2";
    std::string mode = "cycle", pattern_kind = "path", colors_str, equation = "+a+b+c";
    std::string parts_str, cert_path;
    int k = 3, order = 0, alpha = 0, count = 1, x = 1, z = 2, h = 10;
    int max_order = 15, forbidden_size = 0, trials = 200, samples = 1000, retries = 10;
    double p = 1.0, gamma = 0.0;

    auto* fgt = app.add_subcommand("fgt", "orthomorphism with all k-cycles (FGT cycle type)");
    fgt->add_option("--group", group_spec)->required();
    fgt->add_option("--k", k)->required();
    add_common(fgt, opts);

    auto* ct = app.add_subcommand("cycle-type", "orthomorphism with a prescribed cycle type");
    ct->add_option("--group", group_spec)->required();
    ct->add_option("--cycle-type", type_str, "e.g. \"1+3^2\"")->required();
    add_common(ct, opts);

    auto* hp = app.add_subcommand("hall-paige", "sum-of-elements check");
    hp->add_option("--group", group_spec);
    hp->add_option("--order", order, "check every abelian group of this order");
    add_common(hp, opts);

    auto* sw = app.add_subcommand("sweep", "FGT re-verification over all groups up to an order");
    sw->add_option("--max-order", max_order);
    add_common(sw, opts);

    auto* sq = app.add_subcommand("sequence", "order a set as a rainbow cycle/path-candidate");
    sq->add_option("--group", group_spec)->required();
    sq->add_option("--set", set_str, "comma-separated element indices")->required();
    sq->add_option("--mode", mode)->check(CLI::IsMember({"cycle", "path"}));
    add_common(sq, opts);

    auto* zs = app.add_subcommand("zerosum-partition", "partition into fixed-sum blocks");
    zs->add_option("--group", group_spec)->required();
    zs->add_option("--set", set_str, "defaults to G \\ {0}");
    zs->add_option("--k", k, "uniform block size");
    zs->add_option("--alpha", alpha, "with --k 4: common block sum");
    zs->add_option("--sizes", sizes_str, "comma-separated block sizes (Tannenbaum partition)");
    add_common(zs, opts);

    auto* mt = app.add_subcommand("matchable", "decide (A, G)-matchability");
    mt->add_option("--group", group_spec)->required();
    mt->add_option("--matrix", matrix_str, "rows ;-separated, entries ,-separated")->required();
    add_common(mt, opts);

    auto* fm = app.add_subcommand("families", "build and check good families");
    fm->add_option("--group", group_spec)->required();
    fm->add_option("--k", k)->required();
    fm->add_option("--count", count, "family size");
    add_common(fm, opts);

    auto* ab = app.add_subcommand("absorber", "find and verify a pair absorber");
    ab->add_option("--group", group_spec)->required();
    ab->add_option("--k", k);
    ab->add_option("--x", x)->required();
    ab->add_option("--z", z)->required();
    add_common(ab, opts);

    auto* rb = app.add_subcommand("rmbg", "build and verify a robustly matchable bipartite graph");
    rb->add_option("--h", h)->required();
    rb->add_option("--beta", beta_str, "rational, e.g. 1/2");
    rb->add_option("--samples", samples);
    rb->add_option("--retries", retries);
    add_common(rb, opts);

    auto* pb = app.add_subcommand("probe", "Monte Carlo gadget availability probe");
    pb->add_option("--group", group_spec)->required();
    pb->add_option("--p", p, "pool sampling probability");
    pb->add_option("--pattern", pattern_kind)->check(CLI::IsMember({"path", "cycle"}));
    pb->add_option("--colors", colors_str, "colour sequence for the built-in pattern")->required();
    pb->add_option("--forbidden-size", forbidden_size);
    pb->add_option("--trials", trials);
    add_common(pb, opts);

    auto* tp = app.add_subcommand("typicality", "degree statistics of an equation hypergraph");
    tp->add_option("--group", group_spec)->required();
    tp->add_option("--equation", equation, "e.g. \"+a+b+c\" or \"a-b-c\"");
    tp->add_option("--parts", parts_str, "three ;-separated element lists (default full group)");
    tp->add_option("--gamma", gamma);
    tp->add_option("--p", p);
    add_common(tp, opts);

    auto* vf = app.add_subcommand("verify", "re-verify a certificate file");
    vf->add_option("file", cert_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (fgt->parsed()) return run_fgt(group_spec, k, opts);
        if (ct->parsed()) return run_cycle_type(group_spec, type_str, opts);
        if (hp->parsed()) {
            if (group_spec.empty() && order == 0) {
                std::cerr << "hall-paige needs --group or --order\n";
                return kExitUsage;
            }
            return run_hall_paige(group_spec, order, opts);
        }
        if (sw->parsed()) {
            if (sw->count("--format") == 0) opts.format = "csv";
            return run_sweep(max_order, opts);
        }
        if (sq->parsed()) return run_sequence(group_spec, set_str, mode, opts);
        if (zs->parsed())
            return run_zerosum_partition(group_spec, set_str, k, alpha, sizes_str, opts);
        if (mt->parsed()) return run_matchable(group_spec, matrix_str, opts);
        if (fm->parsed()) return run_families(group_spec, k, count, opts);
        if (ab->parsed()) return run_absorber(group_spec, k, x, z, opts);
        if (rb->parsed()) return run_rmbg(h, beta_str, samples, retries, opts);
        if (pb->parsed())
            return run_probe(group_spec, p, pattern_kind, colors_str, forbidden_size, trials, opts);
        if (tp->parsed()) return run_typicality(group_spec, equation, parts_str, gamma, p, opts);
        if (vf->parsed()) return run_verify(cert_path);
    } catch (const ortho::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ortho::BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return kExitUnknown;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

// Command-line front end: instance I/O, generators, LP/exact/approximate
// solving, rounding experiments, the ratio table, and the fault-tolerant
// reduction. Exit codes: 0 success, 2 input error, 3 capacity limit.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "owakm/approx.hpp"
#include "owakm/ballots.hpp"
#include "owakm/bound.hpp"
#include "owakm/distribution.hpp"
#include "owakm/exact.hpp"
#include "owakm/gen.hpp"
#include "owakm/json_io.hpp"
#include "owakm/lp.hpp"
#include "owakm/reduce.hpp"

namespace {

using namespace owakm;
using nlohmann::json;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw InputError("expected a comma-separated integer list, got '" + s + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw InputError("expected a comma-separated number list, got '" + s + "'");
    return out;
}

// --weights harmonic | geometric:P | top_r:R | custom:v1,v2,...
WeightVector parse_weights(const std::string& spec, int k) {
    if (spec == "harmonic") return WeightVector::harmonic(k);
    if (spec.rfind("geometric:", 0) == 0)
        return WeightVector::geometric(k, rational_from_decimal(spec.substr(10)));
    if (spec.rfind("top_r:", 0) == 0) return WeightVector::top_r(k, std::stoi(spec.substr(6)));
    if (spec.rfind("custom:", 0) == 0) {
        auto vals = parse_double_list(spec.substr(7));
        if (static_cast<int>(vals.size()) != k) throw InputError("custom weights must have length k");
        return WeightVector::custom(std::move(vals));
    }
    throw InputError("unknown weight spec '" + spec + "'");
}

rounding::TournamentTree parse_tree(const std::string& spec, int m) {
    if (spec == "balanced") return rounding::TournamentTree::balanced(m);
    if (spec == "linear") return rounding::TournamentTree::linear(m);
    if (spec.rfind("file:", 0) == 0) return io::tree_from_json(io::load_json_file(spec.substr(5)), m);
    throw InputError("unknown tree spec '" + spec + "' (use balanced|linear|file:<shape.json>)");
}

std::string committee_str(const Committee& com) {
    std::string s;
    for (std::size_t i = 0; i < com.members.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(com.members[i]);
    }
    return s;
}

// Writes to the given path, or to stdout when the path is empty.
class OutStream {
public:
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    bool to_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
};

// Human-readable status lines go to stderr when the data itself occupies
// stdout, so piped CSV stays clean.
std::ostream& info(const OutStream& out) { return out.to_stdout() ? std::cerr : std::cout; }

Instance load_instance(const std::string& path) { return io::instance_from_json(io::load_json_file(path)); }

json trials_to_json(const std::vector<approx::TrialReport>& trials) {
    json arr = json::array();
    for (std::size_t t = 0; t < trials.size(); ++t) {
        json row;
        row["trial"]       = t;
        row["seed"]        = trials[t].seed;
        row["cost"]        = trials[t].cost;
        row["ratio_vs_lp"] = trials[t].ratio_vs_lp;
        row["committee"]   = trials[t].committee.members;
        arr.push_back(std::move(row));
    }
    return arr;
}

void write_trials_csv(std::ostream& os, const std::vector<approx::TrialReport>& trials) {
    os << "trial,seed,cost,ratio_vs_lp,committee\n";
    os << std::setprecision(17);
    for (std::size_t t = 0; t < trials.size(); ++t) {
        os << t << ',' << trials[t].seed << ',' << trials[t].cost << ',' << trials[t].ratio_vs_lp << ','
           << committee_str(trials[t].committee) << '\n';
    }
}

std::uint64_t exact_feasible(const Instance& inst, std::uint64_t cap = 2'000'000) {
    return exact::committee_count(inst.m, inst.k, cap) <= cap;
}

int run(int argc, char** argv) {
    CLI::App app{"OWA-k-median solver toolkit (LP relaxation + tournament-tree dependent rounding)"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    auto* cmd_gen = app.add_subcommand("gen", "generate instances");
    cmd_gen->require_subcommand(1);
    std::string g_out, g_weights = "harmonic", g_mode = "nonmetric", g_pops = "4,2", g_input;
    int g_m = 10, g_n = 15, g_k = 3;
    std::uint64_t g_seed = 1;
    double g_lambda = 0.5, g_prob = 0.5;

    auto* gen_random = cmd_gen->add_subcommand("random", "seeded random costs");
    gen_random->add_option("--m", g_m);
    gen_random->add_option("--n", g_n);
    gen_random->add_option("--k", g_k);
    gen_random->add_option("--mode", g_mode, "metric|nonmetric");
    gen_random->add_option("--seed", g_seed);
    gen_random->add_option("--weights", g_weights);
    gen_random->add_option("--out", g_out);

    auto* gen_approval = cmd_gen->add_subcommand("approval", "seeded random 0/1 costs");
    gen_approval->add_option("--m", g_m);
    gen_approval->add_option("--n", g_n);
    gen_approval->add_option("--k", g_k);
    gen_approval->add_option("--prob", g_prob, "probability of a zero cost");
    gen_approval->add_option("--seed", g_seed);
    gen_approval->add_option("--out", g_out);

    auto* gen_cities = cmd_gen->add_subcommand("cities", "city-block proportionality instance");
    gen_cities->add_option("--pops", g_pops, "comma-separated city populations");
    gen_cities->add_option("--k", g_k);
    gen_cities->add_option("--weights", g_weights);
    gen_cities->add_option("--out", g_out);

    auto* gen_x3c = cmd_gen->add_subcommand("x3c", "hard instance from an exact-cover input");
    gen_x3c->add_option("--input", g_input, "x3c file: first line 3n, then triples")->required();
    gen_x3c->add_option("--lambda", g_lambda);
    gen_x3c->add_option("--out", g_out);

    // ---- lp -----------------------------------------------------------
    auto* cmd_lp = app.add_subcommand("lp", "solve the LP relaxation");
    std::string lp_instance, lp_out, lp_mps;
    cmd_lp->add_option("--instance", lp_instance)->required();
    cmd_lp->add_option("--out", lp_out);
    cmd_lp->add_option("--export-mps", lp_mps, "also write the program in MPS form");

    // ---- exact --------------------------------------------------------
    auto* cmd_exact = app.add_subcommand("exact", "brute-force optimum");
    std::string ex_instance, ex_out;
    cmd_exact->add_option("--instance", ex_instance)->required();
    cmd_exact->add_option("--out", ex_out);

    // ---- solve --------------------------------------------------------
    auto* cmd_solve = app.add_subcommand("solve", "LP + dependent rounding over seeded trials");
    std::string s_instance, s_out, s_tree = "balanced", s_format = "csv";
    int s_trials = 200, s_jobs = 1;
    std::uint64_t s_seed = 1;
    bool s_no_exact = false;
    cmd_solve->add_option("--instance", s_instance)->required();
    cmd_solve->add_option("--trials", s_trials);
    cmd_solve->add_option("--seed", s_seed);
    cmd_solve->add_option("--jobs", s_jobs);
    cmd_solve->add_option("--tree", s_tree, "balanced|linear|file:<shape.json>");
    cmd_solve->add_option("--format", s_format, "csv|json");
    cmd_solve->add_option("--out", s_out);
    cmd_solve->add_flag("--no-exact", s_no_exact, "skip the exact oracle even when feasible");

    // ---- round --------------------------------------------------------
    auto* cmd_round = app.add_subcommand("round", "rounding marginals experiment");
    std::string r_y, r_tree = "balanced", r_out;
    int r_samples = 10000;
    std::uint64_t r_seed = 1;
    cmd_round->add_option("--y", r_y, "comma-separated fractional opening vector")->required();
    cmd_round->add_option("--tree", r_tree);
    cmd_round->add_option("--samples", r_samples);
    cmd_round->add_option("--seed", r_seed);
    cmd_round->add_option("--out", r_out);

    // ---- bound --------------------------------------------------------
    auto* cmd_bound = app.add_subcommand("bound", "per-interval approximation ratio table");
    int b_lmax = 88;
    std::string b_out;
    cmd_bound->add_option("--lmax", b_lmax);
    cmd_bound->add_option("--out", b_out);

    // ---- reduce -------------------------------------------------------
    auto* cmd_reduce = app.add_subcommand("reduce", "reduction to fault-tolerant k-median");
    std::string red_instance, red_out;
    cmd_reduce->add_option("--instance", red_instance)->required();
    cmd_reduce->add_option("--out", red_out);

    // ---- pav ----------------------------------------------------------
    auto* cmd_pav = app.add_subcommand("pav", "minimization PAV over approval ballots");
    std::string p_ballots, p_out, p_format = "text";
    int p_k = 1, p_m = -1, p_trials = 200, p_jobs = 1;
    std::uint64_t p_seed = 1;
    bool p_allow_empty = false, p_no_exact = false;
    cmd_pav->add_option("--ballots", p_ballots)->required();
    cmd_pav->add_option("--k", p_k)->required();
    cmd_pav->add_option("--m", p_m, "number of candidates (default: max index + 1)");
    cmd_pav->add_option("--trials", p_trials);
    cmd_pav->add_option("--seed", p_seed);
    cmd_pav->add_option("--jobs", p_jobs);
    cmd_pav->add_option("--format", p_format, "text|json");
    cmd_pav->add_option("--out", p_out, "write the per-trial CSV here");
    cmd_pav->add_flag("--allow-empty", p_allow_empty);
    cmd_pav->add_flag("--no-exact", p_no_exact);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // ---- dispatch -----------------------------------------------------
    if (gen_random->parsed() || gen_approval->parsed() || gen_cities->parsed() || gen_x3c->parsed()) {
        Instance inst = [&] {
            if (gen_random->parsed()) {
                const auto mode = g_mode == "metric" ? gen::RandomMode::metric : gen::RandomMode::nonmetric;
                if (g_mode != "metric" && g_mode != "nonmetric") throw InputError("--mode must be metric|nonmetric");
                return gen::gen_random(g_m, g_n, g_k, mode, g_seed, parse_weights(g_weights, g_k));
            }
            if (gen_approval->parsed()) return gen::gen_approval(g_m, g_n, g_k, g_prob, g_seed);
            if (gen_cities->parsed()) {
                const auto pops = parse_int_list(g_pops);
                if (!gen::cities_divisible(pops, g_k))
                    std::cerr << "note: k*pop_i is not divisible by n; the proportional split is fractional\n";
                return gen::gen_cities(pops, g_k, parse_weights(g_weights, g_k));
            }
            std::ifstream in(g_input);
            if (!in) throw InputError("cannot open x3c input: " + g_input);
            auto [elems, triples] = gen::parse_x3c(in);
            auto x                = gen::gen_x3c(elems, triples, g_lambda);
            std::cerr << "x3c: n=" << elems / 3 << " k=" << x.k << " p=" << x.p << " |H|=" << x.h_count
                      << " |H'|=" << x.hp_count << " m=" << x.inst.m << " clients=" << x.inst.n << "\n";
            return x.inst;
        }();
        OutStream out(g_out);
        out.os() << io::instance_to_json(inst).dump(2) << "\n";
        if (gen_random->parsed() || gen_approval->parsed()) info(out) << "seed: " << g_seed << "\n";
        return 0;
    }

    if (cmd_lp->parsed()) {
        const Instance inst = load_instance(lp_instance);
        const auto prog     = lp::build_lp(inst);
        if (!lp_mps.empty()) {
            std::ofstream mps(lp_mps);
            if (!mps) throw InputError("cannot write file: " + lp_mps);
            lp::export_mps(prog, mps);
        }
        const auto sol = lp::solve_lp(prog);
        json j;
        j["objective"]          = sol.objective;
        j["y"]                  = sol.y;
        j["per_client_lp_cost"] = sol.per_client_lp_cost;
        json wf                 = json::array();
        for (int jc = 0; jc < inst.n; ++jc) wf.push_back(lp::waterfill_client_cost(inst, sol.y, jc));
        j["per_client_waterfill"] = std::move(wf);
        j["iterations"]           = sol.iterations;
        j["basis"]                = sol.basis;
        OutStream out(lp_out);
        out.os() << j.dump(2) << "\n";
        return 0;
    }

    if (cmd_exact->parsed()) {
        const Instance inst = load_instance(ex_instance);
        const auto res      = exact::solve(inst);
        json j;
        j["committee"] = res.committee.members;
        j["value"]     = res.value;
        OutStream out(ex_out);
        out.os() << j.dump(2) << "\n";
        return 0;
    }

    if (cmd_solve->parsed()) {
        const Instance inst = load_instance(s_instance);
        approx::Options opt;
        opt.jobs = s_jobs;
        opt.tree = parse_tree(s_tree, inst.m);
        std::optional<exact::Result> ex;
        if (!s_no_exact && exact_feasible(inst)) {
            ex            = exact::solve(inst);
            opt.exact_opt = ex->value;
        }
        const auto rep = approx::approx_solve(inst, s_trials, s_seed, opt);
        OutStream out(s_out);
        if (s_format == "json") {
            json j;
            j["seed"]          = s_seed;
            j["lp_objective"]  = rep.lp.objective;
            j["mean_cost"]     = rep.stats.mean_cost;
            j["stdev_cost"]    = rep.stats.stdev_cost;
            j["mean_ratio_vs_lp"] = rep.stats.mean_ratio_lp;
            j["lp_degenerate"] = rep.stats.lp_degenerate;
            j["best_cost"]     = rep.best.cost;
            j["best_committee"] = rep.best.committee.members;
            if (ex) {
                j["exact_value"]     = ex->value;
                j["exact_committee"] = ex->committee.members;
            }
            j["trials"] = trials_to_json(rep.trials);
            out.os() << j.dump(2) << "\n";
        } else if (s_format == "csv") {
            write_trials_csv(out.os(), rep.trials);
        } else {
            throw InputError("--format must be csv|json");
        }
        auto& log = info(out);
        log << "seed: " << s_seed << "\n";
        log << "lp_objective: " << rep.lp.objective << "\n";
        log << "mean_cost: " << rep.stats.mean_cost << " stdev: " << rep.stats.stdev_cost << "\n";
        if (!rep.stats.lp_degenerate) log << "mean_ratio_vs_lp: " << rep.stats.mean_ratio_lp << "\n";
        log << "best_committee: " << committee_str(rep.best.committee) << " cost: " << rep.best.cost << "\n";
        if (ex) log << "exact_value: " << ex->value << " exact_committee: " << committee_str(ex->committee) << "\n";
        return 0;
    }

    if (cmd_round->parsed()) {
        const auto yd = parse_double_list(r_y);
        const int m   = static_cast<int>(yd.size());
        const auto tree = parse_tree(r_tree, m);
        const auto y    = rounding::snap_to_grid(yd);
        if (r_samples < 1) throw InputError("--samples must be positive");
        std::vector<long long> counts(static_cast<std::size_t>(m), 0);
        for (int s = 0; s < r_samples; ++s) {
            Rng rng(trial_seed(r_seed, static_cast<std::uint64_t>(s)));
            const auto outcome = rounding::round_tree_exact(y, tree, rng);
            for (int i = 0; i < m; ++i) counts[static_cast<std::size_t>(i)] += outcome.bits[static_cast<std::size_t>(i)];
        }
        std::optional<rounding::ExactDistribution> dist;
        if (m <= 16) dist = rounding::enumerate_distribution(y, tree);
        OutStream out(r_out);
        out.os() << "index,y,empirical_marginal,exact_marginal\n" << std::setprecision(12);
        for (int i = 0; i < m; ++i) {
            out.os() << i << ',' << to_double(y[static_cast<std::size_t>(i)]) << ','
                     << static_cast<double>(counts[static_cast<std::size_t>(i)]) / r_samples << ',';
            if (dist) out.os() << to_double(dist->marginal(i));
            out.os() << '\n';
        }
        info(out) << "seed: " << r_seed << "\n";
        return 0;
    }

    if (cmd_bound->parsed()) {
        const auto rows = bound::bound_table(b_lmax);
        OutStream out(b_out);
        out.os() << "ell,ratio_upper\n" << std::setprecision(12);
        for (const auto& row : rows) out.os() << row.ell << ',' << row.ratio_upper << '\n';
        const auto mx = bound::max_ratio(b_lmax);
        info(out) << "max_ratio: " << std::setprecision(12) << mx.value << " at ell=" << mx.argmax << "\n";
        return 0;
    }

    if (cmd_reduce->parsed()) {
        const Instance inst = load_instance(red_instance);
        const auto ft       = reduce::reduce_owa_to_ft(inst);
        OutStream out(red_out);
        out.os() << io::ft_to_json(ft).dump(2) << "\n";
        info(out) << "Q: " << ft.Q.str() << " clients: " << ft.clients.size() << "\n";
        return 0;
    }

    if (cmd_pav->parsed()) {
        std::ifstream in(p_ballots);
        if (!in) throw InputError("cannot open ballots file: " + p_ballots);
        const auto bl       = ballots::parse_ballots(in, p_allow_empty);
        const Instance inst = ballots::build_pav_instance(bl, p_k, p_m);
        approx::Options opt;
        opt.jobs = p_jobs;
        std::optional<exact::Result> ex;
        if (!p_no_exact && exact_feasible(inst)) {
            ex            = exact::solve(inst);
            opt.exact_opt = ex->value;
        }
        const auto rep = approx::approx_solve(inst, p_trials, p_seed, opt);
        if (!p_out.empty()) {
            OutStream csv(p_out);
            write_trials_csv(csv.os(), rep.trials);
        }
        if (p_format == "json") {
            json j;
            j["seed"]             = p_seed;
            j["m"]                = inst.m;
            j["n"]                = inst.n;
            j["k"]                = inst.k;
            j["lp_objective"]     = rep.lp.objective;
            j["mean_ratio_vs_lp"] = rep.stats.mean_ratio_lp;
            j["lp_degenerate"]    = rep.stats.lp_degenerate;
            j["committee"]        = rep.best.committee.members;
            j["best_cost"]        = rep.best.cost;
            if (ex) {
                j["exact_committee"] = ex->committee.members;
                j["exact_value"]     = ex->value;
            }
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "seed: " << p_seed << "\n";
            std::cout << "m: " << inst.m << " n: " << inst.n << " k: " << inst.k << "\n";
            std::cout << "lp_objective: " << rep.lp.objective << "\n";
            if (!rep.stats.lp_degenerate) std::cout << "mean_ratio_vs_lp: " << rep.stats.mean_ratio_lp << "\n";
            std::cout << "committee: " << committee_str(rep.best.committee) << "\n";
            std::cout << "best_cost: " << rep.best.cost << "\n";
            if (ex) {
                std::cout << "exact_committee: " << committee_str(ex->committee) << "\n";
                std::cout << "exact_value: " << ex->value << "\n";
                if (ex->value > 0) std::cout << "best_ratio_vs_opt: " << rep.best.cost / ex->value << "\n";
            }
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const owakm::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const owakm::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

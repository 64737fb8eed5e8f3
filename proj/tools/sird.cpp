#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sird/classifiers.hpp"
#include "sird/identity_lab.hpp"
#include "sird/info.hpp"
#include "sird/problem_io.hpp"
#include "sird/rd_solvers.hpp"
#include "sird/succ_refine.hpp"

using nlohmann::json;
using namespace sird;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void write_record(const std::string& out, const std::string& command,
                  const SourceInstance& inst, std::uint64_t seed, const json& options,
                  const json& results, double wall_ms) {
    RunRecord rec;
    rec.command = command;
    rec.instance_hash = instance_hash(inst);
    rec.seed = seed;
    rec.options = options.dump();
    rec.results = results.dump();
    rec.version = toolkit_version();
    rec.wall_ms = wall_ms;
    if (out.empty()) return;
    std::ofstream f(out);
    if (!f) throw IoError("cannot write " + out);
    f << rec.to_json() << "\n";
}

std::string verdict_name(ClnStatus s) {
    switch (s) {
        case ClnStatus::CLN: return "CLN";
        case ClnStatus::NotCLN: return "NotCLN";
        default: return "Inconclusive";
    }
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> g;
    if (s.find(':') != std::string::npos) {
        double lo, step, hi;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &step, &hi) != 3 || step <= 0)
            throw ParseError("grid must be start:step:stop");
        for (double v = lo; v <= hi + 1e-12; v += step) g.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) g.push_back(std::stod(tok));
    }
    return g;
}

SolveOptions make_opts(std::uint64_t seed, std::size_t restarts, const std::string& caps) {
    SolveOptions o;
    o.opt.seed = seed;
    if (restarts) o.opt.restarts = restarts;
    if (!caps.empty()) {
        std::size_t c = 0, a = 0, b = 0;
        if (std::sscanf(caps.c_str(), "%zu,%zu,%zu", &c, &a, &b) == 3) {
            o.cap_c = c;
            o.cap_a = a;
            o.cap_b = b;
        } else if (caps == "full") {
            o.full_caps = true;
        } else {
            throw ParseError("--caps expects C,A,B or 'full'");
        }
    }
    return o;
}

int cmd_classify(const std::string& file, const std::string& relation,
                 const std::string& given_csv, std::uint64_t seed, std::size_t restarts,
                 const std::string& out) {
    Timer timer;
    SourceInstance inst = parse_problem(file);
    std::vector<std::string> given;
    {
        std::stringstream ss(given_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) given.push_back(tok);
    }
    json res;
    if (relation == "physical") {
        double r = markov_residual(inst.joint, inst.x_axes, {"Y2"}, {"Y1"});
        res["markov_residual"] = r;
        res["physically_degraded"] = r < 1e-9;
        std::cout << "physical degradedness (X - Y2 - Y1): residual " << format_sig(r)
                  << (r < 1e-9 ? " => degraded" : " => not degraded") << "\n";
    } else if (relation == "stochastic") {
        auto d = stochastic_degradedness(inst.joint, inst.x_axes);
        res["feasible"] = d.feasible;
        res["infeasibility"] = d.infeasibility;
        std::cout << "stochastic degradedness: "
                  << (d.feasible ? "feasible" : "infeasible") << " (phase-1 margin "
                  << format_sig(d.infeasibility) << ")\n";
    } else if (relation == "cln" || relation == "less-noisy") {
        ClnOptions co;
        co.opt.seed = seed;
        if (restarts) co.opt.restarts = restarts;
        ClnVerdict v = relation == "cln" ? cln_margin(inst.joint, inst.x_axes, given, co)
                                         : is_less_noisy(inst.joint, inst.x_axes, co);
        res["verdict"] = verdict_name(v.verdict);
        res["margin_bits"] = v.margin_bits;
        res["searched_cardinality"] = v.searched_cardinality;
        std::cout << "CLN(Y2 >= Y1";
        for (std::size_t i = 0; i < given.size(); ++i)
            std::cout << (i ? "," : " | ") << given[i];
        std::cout << "): " << verdict_name(v.verdict) << ", margin "
                  << format_sig(v.margin_bits) << " bits, |W| searched up to "
                  << v.searched_cardinality << "\n";
    } else {
        throw ParseError("unknown relation: " + relation);
    }
    write_record(out, "classify", inst, seed,
                 json{{"relation", relation}, {"given", given_csv}}, res, timer.ms());
    return kExitOk;
}

int cmd_solve_rd(const std::string& file, double d1, double d2, std::uint64_t seed,
                 std::size_t restarts, const std::string& caps, const std::string& out) {
    Timer timer;
    SourceInstance inst = parse_problem(file);
    SolveOptions opts = make_opts(seed, restarts, caps);
    json res;
    if (inst.psi_present(1) && d1 == 0.0) {
        Theorem3Result t = theorem3_rate(inst, d2, opts);
        res["conditions_met"] = t.conditions_met;
        res["lower_bits"] = t.lower;
        res["upper_bits"] = t.upper;
        res["cln_margin"] = t.cln.margin_bits;
        if (t.conditions_met) {
            res["rate_bits"] = t.rate;
            std::cout << "R(0," << d2 << ") = " << format_sig(t.rate) << " bits (exact)\n";
        } else {
            std::cout << "R(0," << d2 << ") in [" << format_sig(t.lower) << ", "
                      << format_sig(t.upper) << "] bits (conditions not met)\n";
        }
    } else {
        BoundResult ub = hb_upper_bound(inst, d1, d2, opts);
        res["upper_bits"] = ub.bits;
        std::cout << "R(" << d1 << "," << d2 << ") <= " << format_sig(ub.bits) << " bits\n";
    }
    write_record(out, "solve rd", inst, seed,
                 json{{"d1", d1}, {"d2", d2}, {"caps", caps}}, res, timer.ms());
    return kExitOk;
}

int cmd_solve_sr(const std::string& file, double d3, bool scalable, std::uint64_t seed,
                 std::size_t restarts, const std::string& caps, const std::string& out) {
    Timer timer;
    SourceInstance inst = parse_problem(file);
    SolveOptions opts = make_opts(seed, restarts, caps);
    json res;
    if (scalable) {
        Theorem6Result t = theorem6_region(inst, opts);
        res["conditions_met"] = t.conditions_met;
        res["case"] = t.which == Theorem6Case::CaseI ? "i" : "ii";
        res["r1"] = t.corner.r1;
        res["r1_plus_r2"] = t.corner.r12;
        std::cout << "scalable corner (case " << res["case"].get<std::string>()
                  << (t.conditions_met ? ", exact" : ", conditions not met")
                  << "): R1 >= " << format_sig(t.corner.r1)
                  << ", R1+R2 >= " << format_sig(t.corner.r12) << "\n";
    } else {
        Theorem5Result t = theorem5_region(inst, d3, opts);
        res["conditions_met"] = t.conditions_met;
        res["r1"] = t.corner.r1;
        res["r1_plus_r2"] = t.corner.r12;
        res["r1_plus_r2_plus_r3"] = t.corner.r123;
        res["outer_margin2"] = t.outer.cln2.margin_bits;
        res["outer_margin3"] = t.outer.cln3.margin_bits;
        std::cout << (t.conditions_met ? "exact" : "inner") << " corner: R1 >= "
                  << format_sig(t.corner.r1) << ", R1+R2 >= " << format_sig(t.corner.r12)
                  << ", R1+R2+R3 >= " << format_sig(t.corner.r123) << "\n";
        if (!t.conditions_met)
            std::cout << "outer: " << format_sig(t.outer.r1) << ", "
                      << format_sig(t.outer.r12) << ", " << format_sig(t.outer.r123) << "\n";
    }
    write_record(out, scalable ? "solve sr --scalable" : "solve sr", inst, seed,
                 json{{"d3", d3}, {"scalable", scalable}}, res, timer.ms());
    return kExitOk;
}

int cmd_sweep(const std::string& file, const std::string& grid_spec, std::uint64_t seed,
              std::size_t restarts, const std::string& caps, const std::string& out) {
    Timer timer;
    SourceInstance inst = parse_problem(file);
    SolveOptions opts = make_opts(seed, restarts, caps);
    std::vector<double> grid = parse_grid(grid_spec);
    auto rows = rd_curve_sweep(inst, grid, opts);
    std::vector<std::vector<double>> table;
    for (const auto& r : rows)
        table.push_back({r.d2, r.lower_bits, r.upper_bits, r.gap_bits, r.cln_margin});
    const std::vector<std::string> header{"d2", "lower_bits", "upper_bits", "gap_bits",
                                          "cln_margin"};
    if (!out.empty()) {
        emit_csv(header, table, out);
        std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            std::cout << (i ? "," : "") << header[i];
        std::cout << "\n";
        for (const auto& row : table) {
            for (std::size_t i = 0; i < row.size(); ++i)
                std::cout << (i ? "," : "") << format_sig(row[i]);
            std::cout << "\n";
        }
    }
    write_record("", "sweep", inst, seed, json{{"d2", grid_spec}}, json::object(),
                 timer.ms());
    return kExitOk;
}

JointPMF random_pairs_joint(std::mt19937_64& rng, std::size_t n, std::size_t card) {
    std::vector<Alphabet> axes;
    for (std::size_t t = 1; t <= n; ++t) axes.push_back(Alphabet::indexed("A." + std::to_string(t), card));
    for (std::size_t t = 1; t <= n; ++t) axes.push_back(Alphabet::indexed("B." + std::to_string(t), card));
    std::size_t cells = 1;
    for (const auto& a : axes) cells *= a.size();
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> p(cells);
    double s = 0.0;
    for (auto& v : p) s += (v = exp1(rng));
    for (auto& v : p) v /= s;
    return JointPMF(std::move(axes), std::move(p));
}

int cmd_verify_identities(std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
    std::uniform_int_distribution<std::size_t> pick_n(1, 3), pick_card(2, 3);
    double worst_tel = 0.0, worst_csi = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        JointPMF j = random_pairs_joint(rng, pick_n(rng), pick_card(rng));
        worst_tel = std::max(worst_tel, telescoping_residual(j));
        worst_csi = std::max(worst_csi, csiszar_residual(j));
    }
    bool tel_ok = worst_tel < 1e-10, csi_ok = worst_csi < 1e-10;
    std::cout << "telescoping identity: worst residual " << format_sig(worst_tel) << " over "
              << trials << " trials => " << (tel_ok ? "PASS" : "FAIL") << "\n";
    std::cout << "csiszar sum identity: worst residual " << format_sig(worst_csi) << " over "
              << trials << " trials => " << (csi_ok ? "PASS" : "FAIL") << "\n";

    // single-letterization at n = 2, binary alphabets
    std::exponential_distribution<double> exp1(1.0);
    double worst_res = 0.0, worst_mc = 0.0;
    std::size_t sl_trials = std::max<std::size_t>(1, trials / 4);
    for (std::size_t t = 0; t < sl_trials; ++t) {
        std::vector<Alphabet> axes;
        for (const char* nm : {"R", "S1", "S2", "T", "L"}) axes.push_back(Alphabet::binary(nm));
        std::vector<double> p(32);
        double s = 0.0;
        for (auto& v : p) s += (v = exp1(rng));
        for (auto& v : p) v /= s;
        JointPMF base(axes, p);

        std::vector<Alphabet> in{Alphabet::binary("R.1"), Alphabet::binary("L.1"),
                                 Alphabet::binary("R.2"), Alphabet::binary("L.2")};
        const std::size_t jcard = 2;
        std::vector<double> cp(16 * jcard);
        for (std::size_t sl = 0; sl < 16; ++sl) {
            double rowsum = 0.0;
            for (std::size_t o = 0; o < jcard; ++o) rowsum += (cp[sl * jcard + o] = exp1(rng));
            for (std::size_t o = 0; o < jcard; ++o) cp[sl * jcard + o] /= rowsum;
        }
        Channel jch(in, Alphabet::indexed("J", jcard), cp);
        LetterizationReport rep = single_letterize(base, jch, 2);
        worst_res = std::max(worst_res, rep.residual);
        worst_mc = std::max(worst_mc, rep.markov_residual);
    }
    bool sl_ok = worst_res < 1e-9 && worst_mc < 1e-9;
    std::cout << "single-letterization (n=2): worst residual " << format_sig(worst_res)
              << ", worst markov residual " << format_sig(worst_mc) << " over " << sl_trials
              << " trials => " << (sl_ok ? "PASS" : "FAIL") << "\n";
    return (tel_ok && csi_ok && sl_ok) ? kExitOk : kExitAssert;
}

int cmd_reproduce(const std::string& id, const std::string& instance_dir, std::uint64_t seed) {
    SolveOptions opts;
    opts.opt.seed = seed;
    int failures = 0;
    auto check = [&](const std::string& what, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << what << ": " << detail << "\n";
        if (!ok) ++failures;
    };

    if (id == "example2") {
        SourceInstance inst = parse_problem(instance_dir + "/example2.json");
        double h_x1_y2 = cond_entropy(inst.joint, {"X1"}, {"Y2"});
        check("H(X1|Y2) = 2/3", std::abs(h_x1_y2 - 2.0 / 3.0) < 1e-12, format_sig(h_x1_y2));

        auto sd = stochastic_degradedness(inst.joint, inst.x_axes);
        check("not stochastically degraded", !sd.feasible,
              "phase-1 margin " + format_sig(sd.infeasibility));

        TwoSourceResult two = lossless_two_source_rate(inst, opts);
        check("CLN(Y2 >= Y1 | X1)", two.cln.verdict == ClnStatus::CLN,
              "margin " + format_sig(two.cln.margin_bits) + " bits");

        double expect = binary_entropy(0.25) + binary_entropy(1.0 / 3.0);
        Theorem3Result t3 = theorem3_rate(inst, 0.0, opts);
        check("theorem conditions met", t3.conditions_met,
              t3.conditions_met ? "CLN + entropy comparison hold" : "conditions failed");
        check("R(0,0) = Hb(1/4) + Hb(1/3)", std::abs(t3.rate - expect) < 1e-3,
              format_sig(t3.rate) + " vs " + format_sig(expect));
    } else if (id == "example1") {
        SourceInstance inst = parse_problem(instance_dir + "/example1.json");
        double res = markov_residual(inst.joint, inst.x_axes, {"Y2"}, {"Y1"});
        check("not physically degraded", res > 0.01, "residual " + format_sig(res));

        ClnOptions co;
        co.opt.seed = seed;
        ClnVerdict v = cln_margin(inst.joint, inst.x_axes, {"X1"}, co);
        check("CLN(Y2 >= Y1 | X1)", v.verdict == ClnStatus::CLN,
              "margin " + format_sig(v.margin_bits) + " bits");
    } else {
        throw ParseError("unknown example id: " + id);
    }
    return failures == 0 ? kExitOk : kExitAssert;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-distortion with side information at multiple receivers"};
    app.require_subcommand(1);

    std::string instance_file, given, caps, out, relation = "cln", example_id, grid;
    std::string instance_dir = "instances";
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    std::uint64_t seed = 0;
    std::size_t restarts = 0, trials = 100;
    bool scalable = false;

    auto* classify = app.add_subcommand("classify", "side-information ordering tests");
    classify->add_option("--instance", instance_file)->required();
    classify->add_option("--relation", relation, "physical|stochastic|cln|less-noisy");
    classify->add_option("--given", given, "comma-separated conditioning axes");
    classify->add_option("--seed", seed);
    classify->add_option("--restarts", restarts);
    classify->add_option("--out", out, "write a JSON run record");

    auto* solve = app.add_subcommand("solve", "rate-distortion solvers");
    solve->require_subcommand(1);
    auto* rd = solve->add_subcommand("rd", "two-receiver bounds / exact rate");
    rd->add_option("--instance", instance_file)->required();
    rd->add_option("--d1", d1);
    rd->add_option("--d2", d2);
    rd->add_option("--caps", caps, "C,A,B or 'full'");
    rd->add_option("--seed", seed);
    rd->add_option("--restarts", restarts);
    rd->add_option("--out", out);
    auto* sr = solve->add_subcommand("sr", "successive-refinement corners");
    sr->add_option("--instance", instance_file)->required();
    sr->add_option("--d3", d3);
    sr->add_flag("--scalable", scalable, "two-stage scalable setting");
    sr->add_option("--caps", caps);
    sr->add_option("--seed", seed);
    sr->add_option("--restarts", restarts);
    sr->add_option("--out", out);

    auto* sweep = app.add_subcommand("sweep", "RD curve over a D2 grid");
    sweep->add_option("--instance", instance_file)->required();
    sweep->add_option("--d2", grid, "comma list or start:step:stop")->required();
    sweep->add_option("--caps", caps);
    sweep->add_option("--seed", seed);
    sweep->add_option("--restarts", restarts);
    sweep->add_option("--out", out, "CSV path (default: stdout)");

    auto* verify = app.add_subcommand("verify-identities", "numeric identity suite");
    verify->add_option("--trials", trials);
    verify->add_option("--seed", seed);

    auto* repro = app.add_subcommand("reproduce", "reproduce a bundled example");
    repro->add_option("id", example_id, "example1|example2")->required();
    repro->add_option("--instances", instance_dir, "directory with bundled instance files");
    repro->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed())
            return cmd_classify(instance_file, relation, given, seed, restarts, out);
        if (solve->parsed() && rd->parsed())
            return cmd_solve_rd(instance_file, d1, d2, seed, restarts, caps, out);
        if (solve->parsed() && sr->parsed())
            return cmd_solve_sr(instance_file, d3, scalable, seed, restarts, caps, out);
        if (sweep->parsed())
            return cmd_sweep(instance_file, grid, seed, restarts, caps, out);
        if (verify->parsed()) return cmd_verify_identities(trials, seed);
        if (repro->parsed()) return cmd_reproduce(example_id, instance_dir, seed);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}

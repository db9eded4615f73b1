// kgbell — correlation Bell inequalities, their classical and vector maxima,
// and the derived Grothendieck-constant / Werner-visibility bounds.
//
// Subcommands: construct, local-bound, seesaw, certify, tightness, reduce,
// figure, reproduce.  Human summary goes to stdout; --out writes the machine
// report (JSON).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgbell/bell.hpp"
#include "kgbell/certify.hpp"
#include "kgbell/constructions.hpp"
#include "kgbell/polytope.hpp"
#include "kgbell/seesaw.hpp"
#include "kgbell/serialize.hpp"

namespace {

using nlohmann::json;

struct InstanceArgs {
    int na = 0, nb = 0, n = 0;
    bool marginals = false;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& args, bool required) {
    auto* na = cmd->add_option("--na", args.na, "Alice plain settings");
    auto* nb = cmd->add_option("--nb", args.nb, "Bob plain settings");
    auto* n = cmd->add_option("--n", args.n, "shorthand for --na N --nb N");
    cmd->add_flag("--marginals", args.marginals, "add the +-1 marginal terms (square case)");
    na->check(CLI::PositiveNumber);
    nb->check(CLI::PositiveNumber);
    n->check(CLI::PositiveNumber);
    n->excludes(na)->excludes(nb);
    if (required) {
        // either --n or both --na/--nb
        na->needs(nb);
        nb->needs(na);
    }
}

kgbell::BellInequality make_instance(const InstanceArgs& args) {
    int na = args.n > 0 ? args.n : args.na;
    int nb = args.n > 0 ? args.n : args.nb;
    if (na < 1 || nb < 1)
        throw CLI::ValidationError("instance", "specify --n or both --na and --nb");
    return kgbell::build_inequality(na, nb, args.marginals);
}

struct SeesawArgs {
    int d = 3;
    int iters = 1000;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    int restarts = 8;
    std::string init = "indexed";
};

void add_seesaw_flags(CLI::App* cmd, SeesawArgs& args) {
    cmd->add_option("--d", args.d, "vector dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--iters", args.iters, "sweep budget")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", args.tol, "relative value tolerance");
    cmd->add_option("--seed", args.seed, "seed for the restart streams");
    cmd->add_option("--restarts", args.restarts, "number of starts (first uses --init)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--init", args.init, "first start: indexed|paper|random")
        ->check(CLI::IsMember({"indexed", "paper", "random"}));
}

kgbell::SeesawConfig make_config(const SeesawArgs& args) {
    kgbell::SeesawConfig cfg;
    cfg.d = args.d;
    cfg.max_iters = args.iters;
    cfg.value_tolerance = args.tol;
    cfg.seed = args.seed;
    cfg.restarts = args.restarts;
    cfg.init = kgbell::init_scheme_from_name(args.init);
    return cfg;
}

kgbell::SeesawReport run_seesaw(const kgbell::BellInequality& ineq,
                                const kgbell::SeesawConfig& cfg) {
    return ineq.is_symmetric() ? kgbell::seesaw_symmetric(ineq, cfg)
                               : kgbell::seesaw_alternating(ineq, cfg);
}

void write_report(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << "\n";
}

json wrap_report(const std::string& command, json results, double wall_s) {
    return {{"schema_version", 1},
            {"command", command},
            {"results", std::move(results)},
            {"wall_time_s", wall_s}};
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_seesaw_summary(const kgbell::BellInequality& ineq, const kgbell::SeesawReport& rep) {
    std::printf("%s  d=%d\n", ineq.label.c_str(), rep.config_used.d);
    std::printf("  value           %.9f\n", rep.value);
    if (!std::isnan(rep.ratio)) {
        std::printf("  local bound     %lld\n",
                    static_cast<long long>(std::llround(rep.value / rep.ratio)));
        std::printf("  ratio (K_G lb)  %.9f\n", rep.ratio);
        if (rep.ratio > 1.0) std::printf("  visibility      %.9f\n", 1.0 / rep.ratio);
    }
    std::printf("  sweeps %d  converged %s  min denominator %.3e  restart %d\n",
                rep.iterations_used, rep.converged ? "yes" : "no", rep.min_denominator,
                rep.best_restart);
}

int cmd_construct(const InstanceArgs& iargs, const std::string& format,
                  const std::string& out) {
    auto ineq = make_instance(iargs);
    const auto fmt = format != "coord" ? kgbell::ExportFormat::structured_text
                                      : kgbell::ExportFormat::coordinate_text;
    const std::string text = kgbell::export_matrix(ineq, fmt);
    std::printf("%s: mA=%d mB=%d nnz=%lld\n", ineq.label.c_str(), ineq.mA, ineq.mB, ineq.nnz());
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) {
            std::fprintf(stderr, "cannot write %s\n", out.c_str());
            return 1;
        }
        os << text;
    } else {
        std::fputs(text.c_str(), stdout);
    }
    return 0;
}

int cmd_local_bound(const InstanceArgs& iargs, const std::string& method,
                    const std::string& out) {
    Stopwatch watch;
    auto ineq = make_instance(iargs);
    const int na = ineq.family_nA, nb = ineq.family_nB;
    json results;
    results["label"] = ineq.label;
    std::optional<long long> closed, kl, brute;
    if ((method == "closed" || method == "all") && !ineq.has_marginals()) {
        closed = kgbell::local_bound_closed(na, nb);
        results["closed_form"] = *closed;
    }
    if (method == "kl" || method == "all") {
        kl = kgbell::local_bound_kl(na, nb, iargs.marginals).bound;
        results["kl_enumeration"] = *kl;
    }
    if ((method == "brute" || method == "all") && ineq.mA <= 24) {
        brute = kgbell::local_bound_bruteforce(ineq).bound;
        results["brute_force"] = *brute;
    }
    if ((closed && kl && *closed != *kl) || (kl && brute && *kl != *brute) ||
        (closed && brute && *closed != *brute)) {
        std::fprintf(stderr, "local bound methods disagree!\n");
        return 1;
    }
    long long bound = closed ? *closed : kl ? *kl : brute ? *brute : 0;
    std::printf("%s: local bound %lld\n", ineq.label.c_str(), bound);
    write_report(out, wrap_report("local-bound", results, watch.seconds()));
    return 0;
}

int cmd_seesaw(const InstanceArgs& iargs, const SeesawArgs& sargs, const std::string& out) {
    Stopwatch watch;
    auto ineq = make_instance(iargs);
    auto rep = run_seesaw(ineq, make_config(sargs));
    print_seesaw_summary(ineq, rep);
    write_report(out, wrap_report("seesaw", kgbell::seesaw_report_to_json(ineq, rep),
                                  watch.seconds()));
    return 0;
}

int cmd_certify(const InstanceArgs& iargs, const SeesawArgs& sargs, const std::string& out) {
    Stopwatch watch;
    auto ineq = make_instance(iargs);
    auto rep = run_seesaw(ineq, make_config(sargs));
    auto cert = kgbell::certificate_from_fixed_point(ineq, rep.assignment);
    std::printf("%s  d=%d\n", ineq.label.c_str(), sargs.d);
    std::printf("  see-saw value   %.9f\n", rep.value);
    std::printf("  upper bound     %.9f  (shift %.3e, gap %.3e)\n", cert.bound, cert.shift,
                cert.gap);
    std::printf("  verified        %s\n", cert.verified ? "yes" : "no");
    json results;
    results["seesaw"] = kgbell::seesaw_report_to_json(ineq, rep);
    results["certificate"] = kgbell::certificate_to_json(cert);
    write_report(out, wrap_report("certify", std::move(results), watch.seconds()));
    return 0;
}

int cmd_tightness(const InstanceArgs& iargs, const std::string& out,
                  const std::string& strategies_out) {
    Stopwatch watch;
    auto ineq = make_instance(iargs);
    auto rep = kgbell::tightness(ineq);
    std::printf("%s: local bound %lld, %lld saturating strategies, rank %lld of %lld -> %s\n",
                rep.label.c_str(), rep.local_bound, rep.saturating_count, rep.rank,
                rep.ambient_dimension, rep.tight ? "tight" : "not tight");
    if (!strategies_out.empty()) {
        std::ofstream os(strategies_out);
        if (!os) {
            std::fprintf(stderr, "cannot write %s\n", strategies_out.c_str());
            return 1;
        }
        os << kgbell::export_strategies_csv(kgbell::saturating_strategies(ineq));
    }
    write_report(out, wrap_report("tightness", kgbell::tightness_report_to_json(rep),
                                  watch.seconds()));
    return 0;
}

int cmd_reduce(int n, const std::string& out) {
    Stopwatch watch;
    json chain = json::array();
    for (int k = n; k >= 3; --k) {
        auto ev = kgbell::reduce_inclusion(k);
        std::printf("I'(%d,%d) -> I'(%d,%d): coefficients %s, offset %lld, bounds %lld = %lld + %lld\n",
                    k, k, k - 1, k - 1, ev.coefficients_match ? "match" : "MISMATCH",
                    ev.constant_offset, ev.source_bound, ev.target_bound, ev.constant_offset);
        chain.push_back(kgbell::inclusion_evidence_to_json(ev));
    }
    write_report(out, wrap_report("reduce", std::move(chain), watch.seconds()));
    return 0;
}

int cmd_figure(const std::string& out_base) {
    const std::string csv_path = out_base + ".csv";
    const std::string svg_path = out_base + ".svg";
    std::ofstream csv(csv_path), svg(svg_path);
    if (!csv || !svg) {
        std::fprintf(stderr, "cannot write %s / %s\n", csv_path.c_str(), svg_path.c_str());
        return 1;
    }
    csv << kgbell::three_circle_csv();
    svg << kgbell::three_circle_svg();
    std::printf("wrote %s and %s\n", csv_path.c_str(), svg_path.c_str());
    return 0;
}

int reproduce_kg_bounds(std::uint64_t seed, int restarts, const std::string& out) {
    Stopwatch watch;
    auto ineq = kgbell::build_inequality(100, 100);
    json results;
    double ratio3 = 0;
    std::printf("I(100,100), best of %d starts per dimension\n", restarts);
    for (int d : {3, 4, 5}) {
        kgbell::SeesawConfig cfg;
        cfg.d = d;
        cfg.seed = seed;
        cfg.restarts = restarts;
        auto rep = kgbell::seesaw_symmetric(ineq, cfg);
        if (d == 3) ratio3 = rep.ratio;
        std::printf("  d=%d  ratio %.6f  (value %.3f, %d sweeps, min denom %.2e)\n", d,
                    rep.ratio, rep.value, rep.iterations_used, rep.min_denominator);
        results["d" + std::to_string(d)] = kgbell::seesaw_report_to_json(ineq, rep);
    }
    const double pc = 1.0 / ratio3;
    std::printf("  Werner visibility threshold p_c <= %.6f\n", pc);
    results["p_c"] = pc;
    write_report(out, wrap_report("reproduce kg-bounds", std::move(results), watch.seconds()));
    return 0;
}

int reproduce_circles30(const std::string& out) {
    Stopwatch watch;
    auto pts = kgbell::three_circle_points();
    const double value = kgbell::reduced_symmetric_value(pts);
    const double ratio = value / 900.0;
    std::printf("30-point three-circle construction\n");
    std::printf("  reduced value  %.6f\n", value);
    std::printf("  ratio          %.6f  (> sqrt(2) = %.6f)\n", ratio, std::sqrt(2.0));
    std::printf("  visibility     %.6f\n", 1.0 / ratio);
    json results = {{"value", value}, {"ratio", ratio}, {"visibility", 1.0 / ratio}};
    write_report(out, wrap_report("reproduce circles30", std::move(results), watch.seconds()));
    return 0;
}

int reproduce_i54(std::uint64_t seed, int restarts, const std::string& out) {
    Stopwatch watch;
    auto ineq = kgbell::build_inequality(5, 4);
    json results;
    std::printf("I(5,4): local bound 20\n");
    kgbell::SeesawReport best;
    for (int d : {4, 25}) {
        kgbell::SeesawConfig cfg;
        cfg.d = d;
        cfg.seed = seed;
        cfg.restarts = restarts;
        auto rep = kgbell::seesaw_alternating(ineq, cfg);
        std::printf("  d=%d   see-saw value %.9f\n", d, rep.value);
        results["d" + std::to_string(d)] = kgbell::seesaw_report_to_json(ineq, rep);
        if (rep.value > best.value) best = rep;
    }
    auto cert = kgbell::certificate_from_fixed_point(ineq, best.assignment);
    std::printf("  upper bound    %.9f  (gap %.3e, verified %s)\n", cert.bound, cert.gap,
                cert.verified ? "yes" : "no");
    std::printf("  bracket        [%.9f, %.9f]\n", best.value, cert.bound);
    std::printf("  ratio          %.9f\n", best.ratio);
    results["certificate"] = kgbell::certificate_to_json(cert);
    results["bracket"] = {best.value, cert.bound};
    write_report(out, wrap_report("reproduce i54", std::move(results), watch.seconds()));
    return 0;
}

int reproduce_tightness(const std::string& out) {
    Stopwatch watch;
    json results = json::array();
    struct Case {
        int na, nb;
        bool marginals;
    };
    const Case cases[] = {{2, 1, false}, {3, 2, false}, {4, 3, false},
                          {2, 2, false}, {3, 3, false}, {4, 4, false},
                          {2, 2, true},  {3, 3, true},  {4, 4, true}};
    for (const auto& c : cases) {
        auto rep = kgbell::tightness(kgbell::build_inequality(c.na, c.nb, c.marginals));
        std::printf("  %-9s rank %lld / %lld  -> %s\n", rep.label.c_str(), rep.rank,
                    rep.ambient_dimension, rep.tight ? "tight" : "not tight");
        results.push_back(kgbell::tightness_report_to_json(rep));
    }
    write_report(out, wrap_report("reproduce tightness", std::move(results), watch.seconds()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation Bell inequalities: local bounds, vector maxima, Grothendieck"
                 " lower bounds, facet tests"};
    app.require_subcommand(1);

    // construct
    InstanceArgs con_args;
    std::string con_format = "coord", con_out;
    auto* con = app.add_subcommand("construct", "build an inequality and export its matrix");
    add_instance_flags(con, con_args, true);
    con->add_option("--format", con_format, "coord|structured (structured = json)")
        ->check(CLI::IsMember({"coord", "structured", "json"}));
    con->add_option("--out", con_out, "write the export here instead of stdout");

    // local-bound
    InstanceArgs lb_args;
    std::string lb_method = "all", lb_out;
    auto* lb = app.add_subcommand("local-bound", "classical bound by independent methods");
    add_instance_flags(lb, lb_args, true);
    lb->add_option("--method", lb_method, "closed|kl|brute|all")
        ->check(CLI::IsMember({"closed", "kl", "brute", "all"}));
    lb->add_option("--out", lb_out, "machine report path");

    // seesaw
    InstanceArgs ss_args;
    SeesawArgs ss_cfg;
    std::string ss_out;
    auto* ss = app.add_subcommand("seesaw", "maximize the vector objective");
    add_instance_flags(ss, ss_args, true);
    add_seesaw_flags(ss, ss_cfg);
    ss->add_option("--out", ss_out, "machine report path");

    // certify
    InstanceArgs ct_args;
    SeesawArgs ct_cfg;
    std::string ct_out;
    auto* ct = app.add_subcommand("certify", "see-saw plus dual upper bound");
    add_instance_flags(ct, ct_args, true);
    add_seesaw_flags(ct, ct_cfg);
    ct->add_option("--out", ct_out, "machine report path");

    // tightness
    InstanceArgs tg_args;
    std::string tg_out, tg_strat;
    auto* tg = app.add_subcommand("tightness", "facet test via saturating strategies");
    add_instance_flags(tg, tg_args, true);
    tg->add_option("--out", tg_out, "machine report path");
    tg->add_option("--strategies-out", tg_strat, "also export the saturating set as CSV");

    // reduce
    int rd_n = 4;
    std::string rd_out;
    auto* rd = app.add_subcommand("reduce", "inclusion chain down to the smallest instance");
    rd->add_option("--n", rd_n, "starting size")->check(CLI::Range(3, 12));
    rd->add_option("--out", rd_out, "machine report path");

    // figure
    std::string fg_out = "three_circles";
    auto* fg = app.add_subcommand("figure", "emit the 30-point figure (CSV + SVG)");
    fg->add_option("--out", fg_out, "output base name");

    // reproduce
    std::string rp_id;
    std::uint64_t rp_seed = 0;
    int rp_restarts = 8;
    std::string rp_out;
    auto* rp = app.add_subcommand("reproduce", "headline tables: kg-bounds|circles30|i54|tightness");
    rp->add_option("id", rp_id, "table identifier")
        ->required()
        ->check(CLI::IsMember({"kg-bounds", "circles30", "i54", "tightness"}));
    rp->add_option("--seed", rp_seed, "seed");
    rp->add_option("--restarts", rp_restarts, "starts per run")->check(CLI::PositiveNumber);
    rp->add_option("--out", rp_out, "machine report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (con->parsed()) return cmd_construct(con_args, con_format, con_out);
        if (lb->parsed()) return cmd_local_bound(lb_args, lb_method, lb_out);
        if (ss->parsed()) return cmd_seesaw(ss_args, ss_cfg, ss_out);
        if (ct->parsed()) return cmd_certify(ct_args, ct_cfg, ct_out);
        if (tg->parsed()) return cmd_tightness(tg_args, tg_out, tg_strat);
        if (rd->parsed()) return cmd_reduce(rd_n, rd_out);
        if (fg->parsed()) return cmd_figure(fg_out);
        if (rp->parsed()) {
            if (rp_id == "kg-bounds") return reproduce_kg_bounds(rp_seed, rp_restarts, rp_out);
            if (rp_id == "circles30") return reproduce_circles30(rp_out);
            if (rp_id == "i54") return reproduce_i54(rp_seed, rp_restarts, rp_out);
            return reproduce_tightness(rp_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

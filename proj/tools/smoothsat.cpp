// Command-line front end: instance derivation, circuit building, CNF encoding,
// solver runs, benchmarks, the ECM reference and the exponent analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smoothsat/analysis.hpp"
#include "smoothsat/circuit.hpp"
#include "smoothsat/cnf.hpp"
#include "smoothsat/ecm.hpp"
#include "smoothsat/errors.hpp"
#include "smoothsat/families.hpp"
#include "smoothsat/harness.hpp"
#include "smoothsat/params.hpp"
#include "smoothsat/smooth.hpp"

namespace ss = smoothsat;

namespace {

std::string fixed4(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

void print_profile_row(const ss::analysis::SpeedupProfile& p, const char* method)
{
    std::cout << fixed4(p.gamma) << "  " << fixed4(p.kappa) << "  " << fixed4(p.beta) << "  " << fixed4(p.delta)
              << "  " << fixed4(p.epsilon) << "  " << fixed4(p.alpha) << "  " << method << '\n';
}

void write_or_print(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ss::IoFailure("cannot write " + path);
    os << text;
}

std::string resolve_solver(const std::string& flag)
{
    if (!flag.empty()) return flag;
    auto env = ss::harness::default_solver();
    if (env.empty()) throw ss::InvalidParameter("no solver: pass --solver or set SMOOTHSAT_SOLVER");
    return env;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"smoothsat: SAT-based smoothness search for NFS relation collection"};
    app.require_subcommand(1);

    // params
    auto* params_cmd = app.add_subcommand("params", "Derive an instance manifest for N");
    std::string params_N;
    double params_gamma = 1.0;
    std::uint64_t params_seed = 0;
    std::string params_out;
    unsigned params_d = 0;
    std::uint64_t params_y = 0, params_u = 0;
    params_cmd->add_option("N", params_N, "Odd integer to factor")->required();
    params_cmd->add_option("--gamma", params_gamma, "Speedup profile for y, u, d");
    params_cmd->add_option("--seed", params_seed, "ECM curve seed");
    params_cmd->add_option("--d", params_d, "Override the polynomial degree");
    params_cmd->add_option("--y", params_y, "Override the smoothness bound");
    params_cmd->add_option("--u", params_u, "Override the search-box radius");
    params_cmd->add_option("-o,--output", params_out, "Manifest path (default stdout)");

    // build-circuit
    auto* build_cmd = app.add_subcommand("build-circuit", "Build a smoothness circuit from a manifest");
    std::string build_family = "varexp", build_manifest, build_out;
    unsigned build_b1 = 11;
    std::uint64_t build_blocks = 0;
    build_cmd->add_option("--family", build_family, "varexp | varfactor | ecm")
        ->check(CLI::IsMember({"varexp", "varfactor", "ecm"}));
    build_cmd->add_option("--manifest", build_manifest, "Instance manifest")->required();
    build_cmd->add_option("--b1", build_b1, "ECM stage-1 bound");
    build_cmd->add_option("--blocks", build_blocks, "ECM block count (0 = from N)");
    build_cmd->add_option("-o,--output", build_out, "Circuit path (default stdout)");

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "Tseitin-encode a circuit to DIMACS");
    std::string encode_in, encode_out;
    bool encode_raw = false;
    encode_cmd->add_option("circuit", encode_in, "Circuit file")->required();
    encode_cmd->add_option("-o,--output", encode_out, "DIMACS path (a .map sidecar is written too)")->required();
    encode_cmd->add_flag("--no-simplify", encode_raw, "Skip unit propagation and pure-literal elimination");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run an external SAT solver on a DIMACS file");
    std::string solve_in, solve_solver, solve_manifest;
    double solve_timeout = 60.0;
    std::size_t solve_k = 0;
    solve_cmd->add_option("cnf", solve_in, "DIMACS file")->required();
    solve_cmd->add_option("--solver", solve_solver, "Solver command; {} is replaced by the file path");
    solve_cmd->add_option("--timeout", solve_timeout, "Seconds");
    solve_cmd->add_option("--enumerate", solve_k, "Collect up to k witnesses via blocking clauses");
    solve_cmd->add_option("--manifest", solve_manifest, "Instance manifest (default: the one named in the .map)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Median solver time per N, scaled by y(N)");
    std::string bench_family = "varexp", bench_from = "1024", bench_to = "262144", bench_solver, bench_out,
                bench_manifests;
    ss::harness::BenchOptions bench_opts;
    unsigned bench_per_octave = 1;
    bench_cmd->add_option("--family", bench_family, "varexp | varfactor | ecm")
        ->check(CLI::IsMember({"varexp", "varfactor", "ecm"}));
    bench_cmd->add_option("--n-from", bench_from, "Smallest N");
    bench_cmd->add_option("--n-to", bench_to, "Largest N");
    bench_cmd->add_option("--reps", bench_opts.reps, "Repetitions per N (odd)");
    bench_cmd->add_option("--solver", bench_solver, "Solver command");
    bench_cmd->add_option("--timeout", bench_opts.timeout_s, "Seconds per solve");
    bench_cmd->add_option("--per-octave", bench_per_octave, "Sizes per doubling of N");
    bench_cmd->add_option("--partitions", bench_opts.partitions, "Split b into this many parallel solves");
    bench_cmd->add_option("--gamma", bench_opts.gamma, "Speedup profile for y, u, d");
    bench_cmd->add_option("--manifest-dir", bench_manifests, "Save each instance manifest here");
    bench_cmd->add_option("-o,--output", bench_out, "CSV path (default stdout)");

    // ecm
    auto* ecm_cmd = app.add_subcommand("ecm", "Run the reference ECM smoothness pipeline on n");
    std::string ecm_n;
    std::uint64_t ecm_y = 0, ecm_seed = 0, ecm_blocks = 0;
    unsigned ecm_b1 = 11;
    bool ecm_quiet = false;
    ecm_cmd->add_option("n", ecm_n, "Integer to test")->required();
    ecm_cmd->add_option("y", ecm_y, "Smoothness bound")->required();
    ecm_cmd->add_option("--seed", ecm_seed, "Curve seed");
    ecm_cmd->add_option("--b1", ecm_b1, "Stage-1 bound");
    ecm_cmd->add_option("--blocks", ecm_blocks, "Block count (0 = from n)");
    ecm_cmd->add_flag("--quiet", ecm_quiet, "Print only the verdict");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Runtime exponent for a gamma-speedup");
    double an_gamma = 1.0, an_kappa = 2.0, an_from = 0.5, an_to = 4.0;
    int an_steps = 0;
    std::string an_csv;
    analyze_cmd->add_option("--gamma", an_gamma, "Search speedup exponent")->required();
    analyze_cmd->add_option("--kappa", an_kappa, "Linear-algebra exponent coefficient");
    analyze_cmd->add_option("--curve-steps", an_steps, "Also emit an alpha(gamma) curve with this many samples");
    analyze_cmd->add_option("--curve-from", an_from, "Curve start");
    analyze_cmd->add_option("--curve-to", an_to, "Curve end");
    analyze_cmd->add_option("--csv", an_csv, "Curve CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*params_cmd) {
            const auto N = ss::parse_integer(params_N);
            auto inst = ss::params::derive_instance(N, ss::analysis::closed_form(params_gamma), params_seed);
            if (params_d || params_y || params_u)
                inst = ss::params::make_instance(N, params_d ? params_d : inst.d, params_y ? params_y : inst.y,
                                                 params_u ? params_u : inst.u, params_seed);
            write_or_print(params_out, ss::params::manifest_string(inst));
            std::cerr << "bound_F bits: " << ss::params::bound_width(inst) << '\n';
        } else if (*build_cmd) {
            const auto inst = ss::params::load_manifest(build_manifest);
            ss::ecm::ScheduleConfig cfg;
            cfg.b1 = build_b1;
            if (build_blocks) cfg.blocks = build_blocks;
            auto c = ss::harness::build_family(ss::circuit::parse_family(build_family), inst, cfg);
            c.manifest_ref = build_manifest;
            write_or_print(build_out, ss::circuit::dump_string(c));
            std::cerr << build_family << ": " << c.input_bit_count() << " input bits, " << c.gate_count()
                      << " gates, width " << c.width << '\n';
        } else if (*encode_cmd) {
            const auto c = ss::circuit::load(encode_in);
            auto f = ss::cnf::tseitin(c);
            std::cerr << "tseitin: " << f.num_vars << " vars, " << f.clauses.size() << " clauses\n";
            if (!encode_raw) {
                auto s = ss::cnf::simplify(f);
                std::cerr << "simplified: " << s.stats.vars_after << " vars, " << s.stats.clauses_after
                          << " clauses\n";
                f = std::move(s.formula);
            }
            ss::cnf::save(encode_out, f);
        } else if (*solve_cmd) {
            const auto solver = resolve_solver(solve_solver);
            const auto f = ss::cnf::load(solve_in);
            std::optional<ss::FactoringInstance> inst;
            const std::string manifest = !solve_manifest.empty() ? solve_manifest : f.varmap.manifest_ref;
            if (!manifest.empty()) inst = ss::params::load_manifest(manifest);
            if (solve_k > 0) {
                if (!inst) throw ss::InvalidParameter("--enumerate needs an instance manifest");
                const auto e = ss::harness::enumerate(f, *inst, solver, solve_k, solve_timeout);
                std::cout << "c witnesses " << e.witnesses.size() << " gcd_rejected " << e.gcd_rejected
                          << " solver_calls " << e.solver_calls << " last " << ss::harness::verdict_name(e.last)
                          << '\n';
                ss::smooth::write_witnesses(std::cout, e.witnesses);
            } else {
                auto r = ss::harness::solve(f, solver, solve_timeout);
                std::cout << "s " << ss::harness::verdict_name(r.verdict) << '\n'
                          << "c time " << r.wall_time << " solver " << r.solver_id << '\n';
                if (r.verdict == ss::harness::Verdict::Sat && inst) {
                    try {
                        const auto w = ss::harness::decode_witness(r.assignment, f, *inst);
                        ss::smooth::write_witnesses(std::cout, {w});
                    } catch (const ss::GcdRejected& e) {
                        std::cout << "c gcd-rejected " << e.what() << '\n';
                    }
                }
                return r.verdict == ss::harness::Verdict::Sat     ? 10
                       : r.verdict == ss::harness::Verdict::Unsat ? 20
                                                                  : 0;
            }
        } else if (*bench_cmd) {
            const auto solver = resolve_solver(bench_solver);
            bench_opts.manifest_dir = bench_manifests;
            const auto Ns = ss::harness::bench_sizes(ss::parse_integer(bench_from), ss::parse_integer(bench_to),
                                                     bench_per_octave);
            const auto records =
                ss::harness::bench(Ns, ss::circuit::parse_family(bench_family), solver, bench_opts, &std::cerr);
            std::ostringstream csv;
            ss::harness::write_bench_csv(csv, records);
            write_or_print(bench_out, csv.str());
        } else if (*ecm_cmd) {
            const auto n = ss::parse_integer(ecm_n);
            ss::ecm::ScheduleConfig cfg;
            cfg.b1 = ecm_b1;
            if (ecm_blocks) cfg.blocks = ecm_blocks;
            const auto schedule = ss::ecm::make_schedule_for(n, ecm_seed, cfg);
            const auto result = ss::ecm::reference_pipeline(n, ecm_y, schedule);
            if (!ecm_quiet) ss::ecm::write_trace(std::cout, result.trace);
            std::cout << "remaining " << ss::to_string(result.final_value) << '\n'
                      << (result.final_value == 1 ? "smooth" : "not-proven-smooth") << '\n';
        } else if (*analyze_cmd) {
            std::cout << "gamma   kappa   beta    delta   epsilon alpha   method\n";
            print_profile_row(ss::analysis::numeric_optimum(an_gamma, an_kappa), "numeric");
            if (an_kappa == 2.0) print_profile_row(ss::analysis::closed_form(an_gamma), "closed-form");
            if (an_steps > 0) {
                const auto curve = ss::analysis::gamma_curve(an_from, an_to, an_steps, an_kappa);
                write_or_print(an_csv, ss::analysis::curve_csv(curve));
            }
        }
    } catch (const ss::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smoothsat/circuit.hpp"
#include "smoothsat/cnf.hpp"
#include "smoothsat/families.hpp"
#include "smoothsat/params.hpp"
#include "smoothsat/smooth.hpp"

namespace smoothsat::harness {

enum class Verdict { Sat, Unsat, Timeout, Unknown };

const char* verdict_name(Verdict v);

struct SolveResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<SmoothnessWitness> witness;  ///< only from solve_instance()
    double wall_time = 0.0;
    std::string solver_id;
    std::string instance_ref;
    std::vector<bool> assignment;  ///< filled on Sat, index = DIMACS variable
};

/// Runs `solver_cmd` through /bin/sh on a temporary DIMACS copy of `f`. A `{}` in the
/// command is replaced by the file path; otherwise the path is appended. The solver's
/// process group is killed when `timeout_s` elapses. Sat models are clause-checked.
/// Throws SolverSpawnFailure or MalformedOutput.
SolveResult solve(const cnf::CnfFormula& f, const std::string& solver_cmd, double timeout_s);

/// Reads (a, b) through the varmap and refactors |F(a,b)| by trial division.
/// Throws GcdRejected for gcd(a,b) != 1 and SoundnessViolation if (a,b) leaves the
/// search box or |F(a,b)| is not y-smooth.
SmoothnessWitness decode_witness(const std::vector<bool>& assignment, const cnf::CnfFormula& f,
                                 const FactoringInstance& inst);

/// solve() followed by decode_witness() on Sat.
SolveResult solve_instance(const cnf::CnfFormula& f, const FactoringInstance& inst,
                           const std::string& solver_cmd, double timeout_s);

struct Enumeration {
    std::vector<SmoothnessWitness> witnesses;
    std::size_t gcd_rejected = 0;
    std::size_t solver_calls = 0;
    Verdict last = Verdict::Unknown;  ///< Unsat when the space was exhausted
};

/// Solve, block (a, b), re-solve until k witnesses, Unsat, or the overall timeout.
Enumeration enumerate(const cnf::CnfFormula& f, const FactoringInstance& inst, const std::string& solver_cmd,
                      std::size_t k, double timeout_s);

/// Formula restricted to b congruent to `part` modulo `parts` (a power of two),
/// by fixing the low bits of the b bus.
cnf::CnfFormula partition_b(const cnf::CnfFormula& f, unsigned part, unsigned parts);

/// Runs one solver per formula concurrently; returns the first Sat (others are
/// killed), or the combined verdict when none is Sat.
SolveResult solve_parallel(const std::vector<cnf::CnfFormula>& parts, const std::string& solver_cmd,
                           double timeout_s);

struct BenchRecord {
    Integer N;
    circuit::Family family = circuit::Family::VarExp;
    std::uint64_t y = 0;
    std::uint64_t u = 0;
    unsigned d = 0;
    unsigned reps = 0;
    double median_time = 0.0;
    double normalized_time = 0.0;  ///< median_time * y
    Verdict verdict = Verdict::Unknown;
    std::string solver_id;
    std::string manifest;
};

struct BenchOptions {
    unsigned reps = 3;
    double timeout_s = 60.0;
    unsigned partitions = 1;     ///< > 1 switches to the partitioned mode
    double gamma = 1.0;          ///< speedup profile used to derive y, u, d
    std::string manifest_dir;    ///< when set, each instance manifest is saved here
    ecm::ScheduleConfig ecm;
};

/// Odd N spread geometrically over [from, to], `per_octave` points per doubling.
std::vector<Integer> bench_sizes(const Integer& from, const Integer& to, unsigned per_octave = 1);

circuit::BoolCircuit build_family(circuit::Family family, const FactoringInstance& inst,
                                  const ecm::ScheduleConfig& ecm_config = {});

/// Derive, build, encode, simplify, and time `reps` solves per N. Timeouts are
/// recorded in the verdict column and the run continues.
std::vector<BenchRecord> bench(const std::vector<Integer>& Ns, circuit::Family family,
                               const std::string& solver_cmd, const BenchOptions& options,
                               std::ostream* progress = nullptr);

inline constexpr const char* bench_csv_header = "N,family,y,u,d,reps,median_s,normalized_s,verdict";

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);

/// Median of an odd-length sample.
double median(std::vector<double> xs);

/// Solver command from the environment (SMOOTHSAT_SOLVER), empty when unset.
std::string default_solver();

}  // namespace smoothsat::harness

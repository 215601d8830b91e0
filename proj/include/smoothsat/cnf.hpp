#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smoothsat/circuit.hpp"

namespace smoothsat::cnf {

using Literal = std::int32_t;
using Clause = std::vector<Literal>;

struct BusBit {
    std::string bus;
    std::size_t bit = 0;
    std::uint32_t var = 0;

    bool operator==(const BusBit&) const = default;
};

struct WireVar {
    circuit::Wire wire = 0;
    std::uint32_t var = 0;

    bool operator==(const WireVar&) const = default;
};

/// Ties DIMACS variables back to circuit wires and input-bus bits.
struct VarMap {
    std::vector<BusBit> bus_bits;  ///< grouped by bus, bits ascending
    std::vector<WireVar> wires;
    std::string manifest_ref;

    /// DIMACS variables of one bus, LSB first.
    std::vector<std::uint32_t> bus_vars(const std::string& bus) const;
    std::vector<std::string> bus_names() const;
    bool operator==(const VarMap&) const = default;
};

struct CnfFormula {
    std::uint32_t num_vars = 0;
    std::vector<Clause> clauses;
    VarMap varmap;

    /// A single empty clause: the canonical unsatisfiable formula.
    bool is_unsat_marker() const { return clauses.size() == 1 && clauses.front().empty(); }
    bool operator==(const CnfFormula&) const = default;
};

/// One variable per wire (var = wire + 1) and a unit clause asserting the output.
CnfFormula tseitin(const circuit::BoolCircuit& c);

struct SimplifyStats {
    std::uint32_t vars_before = 0;
    std::size_t clauses_before = 0;
    std::uint32_t vars_after = 0;
    std::size_t clauses_after = 0;
};

struct Simplified {
    CnfFormula formula;
    SimplifyStats stats;
};

/// Unit propagation, pure-literal elimination and constant folding to fixpoint.
/// Input-bus variables are never eliminated (forced ones stay as unit clauses), so
/// the set of satisfying input-bus assignments is unchanged. Variables are renumbered
/// densely in their original order.
Simplified simplify(const CnfFormula& f);

/// `p cnf <vars> <clauses>` then one `0`-terminated clause per line, LF endings.
void emit_dimacs(std::ostream& os, const CnfFormula& f);
std::string dimacs_string(const CnfFormula& f);
CnfFormula parse_dimacs(std::istream& is);

/// `c manifest <ref>`, `bus <name> bit <i> -> var <v>`, `wire <w> -> var <v>`.
void write_varmap(std::ostream& os, const VarMap& m);
VarMap read_varmap(std::istream& is);

/// Writes `path` and the sidecar `path + ".map"`. Throws IoFailure.
void save(const std::string& path, const CnfFormula& f);
/// Reads `path` and, when present, its `.map` sidecar.
CnfFormula load(const std::string& path);

enum class Verdict { Sat, Unsat, Unknown };

struct SolverAnswer {
    Verdict verdict = Verdict::Unknown;
    std::vector<bool> assignment;  ///< index = variable, slot 0 unused
};

/// Reads `s ...` and `v ...` lines of competition-format solver output.
/// Throws MalformedOutput on contradictory, out-of-range or incomplete models.
SolverAnswer parse_model(std::string_view solver_output, const CnfFormula& f);

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment);

/// Clause excluding exactly the current values of the given buses' variables.
Clause blocking_clause(const CnfFormula& f, const std::vector<bool>& assignment,
                       const std::vector<std::string>& buses);

/// Bus bits (LSB first) read from an assignment through the varmap.
std::vector<std::uint8_t> bus_bits(const CnfFormula& f, const std::vector<bool>& assignment,
                                   const std::string& bus);

}  // namespace smoothsat::cnf

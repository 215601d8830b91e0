#include "smoothsat/cnf.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "smoothsat/errors.hpp"

namespace smoothsat::cnf {

std::vector<std::uint32_t> VarMap::bus_vars(const std::string& bus) const
{
    std::vector<std::pair<std::size_t, std::uint32_t>> found;
    for (const auto& b : bus_bits)
        if (b.bus == bus) found.emplace_back(b.bit, b.var);
    if (found.empty()) throw InvalidParameter("varmap has no bus '" + bus + "'");
    std::sort(found.begin(), found.end());
    std::vector<std::uint32_t> vars;
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (found[i].first != i) throw InvalidParameter("bus '" + bus + "' has a gap in its bits");
        vars.push_back(found[i].second);
    }
    return vars;
}

std::vector<std::string> VarMap::bus_names() const
{
    std::vector<std::string> names;
    for (const auto& b : bus_bits)
        if (std::find(names.begin(), names.end(), b.bus) == names.end()) names.push_back(b.bus);
    return names;
}

CnfFormula tseitin(const circuit::BoolCircuit& c)
{
    using circuit::GateKind;
    CnfFormula f;
    f.num_vars = static_cast<std::uint32_t>(c.gates.size());
    f.clauses.reserve(c.gates.size() * 3 + 1);
    auto v = [](circuit::Wire w) { return static_cast<Literal>(w + 1); };

    for (circuit::Wire w = 0; w < c.gates.size(); ++w) {
        const auto& g = c.gates[w];
        const Literal z = v(w);
        const Literal x = v(g.in0);
        const Literal y = v(g.in1);
        switch (g.kind) {
        case GateKind::Input:
            break;
        case GateKind::Const0:
            f.clauses.push_back({-z});
            break;
        case GateKind::Const1:
            f.clauses.push_back({z});
            break;
        case GateKind::And:
            f.clauses.push_back({-z, x});
            f.clauses.push_back({-z, y});
            f.clauses.push_back({z, -x, -y});
            break;
        case GateKind::Or:
            f.clauses.push_back({z, -x});
            f.clauses.push_back({z, -y});
            f.clauses.push_back({-z, x, y});
            break;
        case GateKind::Xor:
            f.clauses.push_back({-z, x, y});
            f.clauses.push_back({-z, -x, -y});
            f.clauses.push_back({z, -x, y});
            f.clauses.push_back({z, x, -y});
            break;
        case GateKind::Not:
            f.clauses.push_back({z, x});
            f.clauses.push_back({-z, -x});
            break;
        }
    }
    f.clauses.push_back({v(c.output)});

    for (const auto& bus : c.buses)
        for (std::size_t i = 0; i < bus.wires.size(); ++i)
            f.varmap.bus_bits.push_back({bus.name, i, static_cast<std::uint32_t>(bus.wires[i] + 1)});
    f.varmap.wires.reserve(c.gates.size());
    for (circuit::Wire w = 0; w < c.gates.size(); ++w)
        f.varmap.wires.push_back({w, static_cast<std::uint32_t>(w + 1)});
    f.varmap.manifest_ref = c.manifest_ref;
    return f;
}

namespace {

std::size_t lit_index(Literal l)
{
    const auto v = static_cast<std::size_t>(l > 0 ? l : -l);
    return 2 * v + (l < 0 ? 1 : 0);
}

/// Occurrence-list propagation engine used by simplify().
class Propagator {
public:
    explicit Propagator(const CnfFormula& f)
        : f_(f),
          value_(f.num_vars + 1, 0),
          occurs_(2 * (f.num_vars + 1)),
          live_count_(2 * (f.num_vars + 1), 0),
          open_(f.clauses.size()),
          satisfied_(f.clauses.size(), 0)
    {
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            const auto& cl = f.clauses[ci];
            open_[ci] = cl.size();
            for (Literal l : cl) {
                if (l == 0 || static_cast<std::uint32_t>(l > 0 ? l : -l) > f.num_vars)
                    throw InvalidParameter("clause literal out of range");
                occurs_[lit_index(l)].push_back(ci);
                ++live_count_[lit_index(l)];
            }
            if (cl.empty()) conflict_ = true;
        }
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci)
            if (f.clauses[ci].size() == 1) enqueue(f.clauses[ci][0]);
    }

    bool conflict() const { return conflict_; }
    int value(std::uint32_t var) const { return value_[var]; }
    bool clause_satisfied(std::size_t ci) const { return satisfied_[ci] != 0; }
    std::size_t live_count(Literal l) const { return live_count_[lit_index(l)]; }

    void enqueue(Literal l)
    {
        const auto var = static_cast<std::uint32_t>(l > 0 ? l : -l);
        const int want = l > 0 ? 1 : -1;
        if (value_[var] == want) return;
        if (value_[var] == -want) {
            conflict_ = true;
            return;
        }
        value_[var] = want;
        queue_.push_back(l);
    }

    /// Runs until the queue drains or a conflict appears. Returns the set of
    /// variables whose literal counts dropped to zero, for pure-literal checks.
    void propagate(std::vector<std::uint32_t>& touched)
    {
        while (!queue_.empty() && !conflict_) {
            const Literal l = queue_.front();
            queue_.pop_front();
            for (std::size_t ci : occurs_[lit_index(l)]) {
                if (satisfied_[ci]) continue;
                satisfied_[ci] = 1;
                for (Literal o : f_.clauses[ci]) {
                    if (value_of(o) != 0) continue;
                    if (--live_count_[lit_index(o)] == 0) touched.push_back(var_of(o));
                }
            }
            for (std::size_t ci : occurs_[lit_index(-l)]) {
                if (satisfied_[ci]) continue;
                --live_count_[lit_index(-l)];
                if (--open_[ci] == 0) {
                    conflict_ = true;
                    return;
                }
                if (open_[ci] == 1) {
                    for (Literal o : f_.clauses[ci])
                        if (value_of(o) == 0) {
                            enqueue(o);
                            break;
                        }
                    if (conflict_) return;
                }
            }
        }
    }

private:
    static std::uint32_t var_of(Literal l) { return static_cast<std::uint32_t>(l > 0 ? l : -l); }
    int value_of(Literal l) const
    {
        const int v = value_[var_of(l)];
        return l > 0 ? v : -v;
    }

    const CnfFormula& f_;
    std::vector<int> value_;
    std::vector<std::vector<std::size_t>> occurs_;
    std::vector<std::size_t> live_count_;
    std::vector<std::size_t> open_;
    std::vector<std::uint8_t> satisfied_;
    std::deque<Literal> queue_;
    bool conflict_ = false;
};

}  // namespace

Simplified simplify(const CnfFormula& f)
{
    Simplified out;
    out.stats.vars_before = f.num_vars;
    out.stats.clauses_before = f.clauses.size();

    std::vector<std::uint8_t> pinned(f.num_vars + 1, 0);
    for (const auto& b : f.varmap.bus_bits) {
        if (b.var == 0 || b.var > f.num_vars) throw InvalidParameter("varmap bus variable out of range");
        pinned[b.var] = 1;
    }

    Propagator p(f);
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t v = 1; v <= f.num_vars; ++v) candidates.push_back(v);
    p.propagate(candidates);

    while (!p.conflict() && !candidates.empty()) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t v : candidates) {
            if (pinned[v] || p.value(v) != 0) continue;
            const auto lv = static_cast<Literal>(v);
            const std::size_t pos = p.live_count(lv);
            const std::size_t neg = p.live_count(-lv);
            if (pos == 0 && neg == 0) continue;
            if (pos == 0 || neg == 0) {
                p.enqueue(pos ? lv : -lv);
                p.propagate(next);
                if (p.conflict()) break;
            }
        }
        candidates = std::move(next);
    }

    std::vector<std::uint32_t> renumber(f.num_vars + 1, 0);
    auto& g = out.formula;
    g.varmap.manifest_ref = f.varmap.manifest_ref;

    if (p.conflict()) {
        std::uint32_t next_var = 0;
        for (std::uint32_t v = 1; v <= f.num_vars; ++v)
            if (pinned[v]) renumber[v] = ++next_var;
        g.num_vars = next_var;
        g.clauses.push_back({});
    } else {
        std::vector<std::uint8_t> used(f.num_vars + 1, 0);
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            if (p.clause_satisfied(ci)) continue;
            for (Literal l : f.clauses[ci]) {
                const auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
                if (p.value(v) == 0) used[v] = 1;
            }
        }
        std::uint32_t next_var = 0;
        for (std::uint32_t v = 1; v <= f.num_vars; ++v)
            if (pinned[v] || used[v]) renumber[v] = ++next_var;
        g.num_vars = next_var;
        auto map_lit = [&](Literal l) {
            const auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
            const auto nv = static_cast<Literal>(renumber[v]);
            return l > 0 ? nv : -nv;
        };
        for (std::uint32_t v = 1; v <= f.num_vars; ++v)
            if (pinned[v] && p.value(v) != 0)
                g.clauses.push_back({p.value(v) > 0 ? map_lit(static_cast<Literal>(v))
                                                    : map_lit(-static_cast<Literal>(v))});
        for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
            if (p.clause_satisfied(ci)) continue;
            Clause cl;
            for (Literal l : f.clauses[ci]) {
                const auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
                if (p.value(v) == 0) cl.push_back(map_lit(l));
            }
            g.clauses.push_back(std::move(cl));
        }
    }

    for (const auto& b : f.varmap.bus_bits) g.varmap.bus_bits.push_back({b.bus, b.bit, renumber[b.var]});
    for (const auto& w : f.varmap.wires)
        if (w.var <= f.num_vars && renumber[w.var] != 0) g.varmap.wires.push_back({w.wire, renumber[w.var]});

    out.stats.vars_after = g.num_vars;
    out.stats.clauses_after = g.clauses.size();
    return out;
}

void emit_dimacs(std::ostream& os, const CnfFormula& f)
{
    std::string buf;
    buf.reserve(1 << 16);
    buf += "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& cl : f.clauses) {
        for (Literal l : cl) {
            buf += std::to_string(l);
            buf += ' ';
        }
        buf += "0\n";
        if (buf.size() > (1 << 16) - 256) {
            os << buf;
            buf.clear();
        }
    }
    os << buf;
}

std::string dimacs_string(const CnfFormula& f)
{
    std::ostringstream os;
    emit_dimacs(os, f);
    return os.str();
}

CnfFormula parse_dimacs(std::istream& is)
{
    CnfFormula f;
    bool have_header = false;
    std::size_t declared_clauses = 0;
    Clause current;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, kind;
            long long v = -1, c = -1;
            if (!(ls >> p >> kind >> v >> c) || kind != "cnf" || v < 0 || c < 0)
                throw MalformedOutput("bad DIMACS header: " + line);
            f.num_vars = static_cast<std::uint32_t>(v);
            declared_clauses = static_cast<std::size_t>(c);
            have_header = true;
            continue;
        }
        if (!have_header) throw MalformedOutput("DIMACS clause before header");
        long long lit = 0;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (static_cast<unsigned long long>(lit > 0 ? lit : -lit) > f.num_vars)
                throw MalformedOutput("DIMACS literal out of range: " + std::to_string(lit));
            current.push_back(static_cast<Literal>(lit));
        }
        if (!ls.eof()) throw MalformedOutput("bad DIMACS token in: " + line);
    }
    if (!have_header) throw MalformedOutput("missing DIMACS header");
    if (!current.empty()) throw MalformedOutput("unterminated DIMACS clause");
    if (f.clauses.size() != declared_clauses)
        throw MalformedOutput("DIMACS clause count mismatch: header says " + std::to_string(declared_clauses) +
                              ", found " + std::to_string(f.clauses.size()));
    return f;
}

void write_varmap(std::ostream& os, const VarMap& m)
{
    os << "c manifest " << (m.manifest_ref.empty() ? "-" : m.manifest_ref) << '\n';
    for (const auto& b : m.bus_bits) os << "bus " << b.bus << " bit " << b.bit << " -> var " << b.var << '\n';
    for (const auto& w : m.wires) os << "wire " << w.wire << " -> var " << w.var << '\n';
}

VarMap read_varmap(std::istream& is)
{
    VarMap m;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "c") {
            std::string key, value;
            if (ls >> key >> value && key == "manifest") m.manifest_ref = value == "-" ? "" : value;
            continue;
        }
        std::string arrow, var_kw;
        if (head == "bus") {
            BusBit b;
            std::string bit_kw;
            if (!(ls >> b.bus >> bit_kw >> b.bit >> arrow >> var_kw >> b.var) || bit_kw != "bit" || arrow != "->" ||
                var_kw != "var")
                throw MalformedOutput("bad varmap line: " + line);
            m.bus_bits.push_back(std::move(b));
        } else if (head == "wire") {
            WireVar w;
            if (!(ls >> w.wire >> arrow >> var_kw >> w.var) || arrow != "->" || var_kw != "var")
                throw MalformedOutput("bad varmap line: " + line);
            m.wires.push_back(w);
        } else {
            throw MalformedOutput("bad varmap line: " + line);
        }
    }
    return m;
}

void save(const std::string& path, const CnfFormula& f)
{
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoFailure("cannot write " + path);
        emit_dimacs(os, f);
        if (!os) throw IoFailure("write failed for " + path);
    }
    std::ofstream ms(path + ".map", std::ios::binary);
    if (!ms) throw IoFailure("cannot write " + path + ".map");
    write_varmap(ms, f.varmap);
    if (!ms) throw IoFailure("write failed for " + path + ".map");
}

CnfFormula load(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot read " + path);
    CnfFormula f = parse_dimacs(is);
    std::ifstream ms(path + ".map", std::ios::binary);
    if (ms) f.varmap = read_varmap(ms);
    return f;
}

SolverAnswer parse_model(std::string_view solver_output, const CnfFormula& f)
{
    SolverAnswer ans;
    std::vector<int> seen(f.num_vars + 1, 0);
    bool have_status = false;
    bool terminated = false;
    bool any_v = false;

    std::istringstream is{std::string(solver_output)};
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() < 2 || line[1] != ' ') {
            if (line == "s" || line == "v") throw MalformedOutput("empty solver status line");
            continue;
        }
        if (line[0] == 's') {
            const std::string status = line.substr(2);
            Verdict v;
            if (status == "SATISFIABLE") v = Verdict::Sat;
            else if (status == "UNSATISFIABLE") v = Verdict::Unsat;
            else if (status == "UNKNOWN" || status == "INDETERMINATE") v = Verdict::Unknown;
            else throw MalformedOutput("unknown solver status: " + status);
            if (have_status && v != ans.verdict) throw MalformedOutput("conflicting solver status lines");
            ans.verdict = v;
            have_status = true;
        } else if (line[0] == 'v') {
            any_v = true;
            std::istringstream ls(line.substr(2));
            long long lit = 0;
            while (ls >> lit) {
                if (terminated) throw MalformedOutput("model literal after terminating 0");
                if (lit == 0) {
                    terminated = true;
                    continue;
                }
                const auto var = static_cast<unsigned long long>(lit > 0 ? lit : -lit);
                if (var > f.num_vars) throw MalformedOutput("model variable out of range: " + std::to_string(lit));
                const int val = lit > 0 ? 1 : -1;
                if (seen[var] == -val) throw MalformedOutput("contradictory model for variable " + std::to_string(var));
                seen[var] = val;
            }
            if (!ls.eof()) throw MalformedOutput("bad model token in: " + line);
        }
    }

    if (ans.verdict != Verdict::Sat) {
        if (any_v && ans.verdict == Verdict::Unsat) throw MalformedOutput("model lines on an UNSAT answer");
        return ans;
    }
    if (!terminated) throw MalformedOutput("model is missing its terminating 0");

    std::vector<std::uint8_t> mentioned(f.num_vars + 1, 0);
    for (const auto& cl : f.clauses)
        for (Literal l : cl) mentioned[static_cast<std::size_t>(l > 0 ? l : -l)] = 1;
    ans.assignment.assign(f.num_vars + 1, false);
    for (std::uint32_t v = 1; v <= f.num_vars; ++v) {
        if (seen[v] == 0 && mentioned[v]) throw MalformedOutput("model leaves variable " + std::to_string(v) + " unset");
        ans.assignment[v] = seen[v] > 0;
    }
    return ans;
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment)
{
    if (assignment.size() < static_cast<std::size_t>(f.num_vars) + 1) return false;
    for (const auto& cl : f.clauses) {
        const bool ok = std::any_of(cl.begin(), cl.end(), [&](Literal l) {
            const bool v = assignment[static_cast<std::size_t>(l > 0 ? l : -l)];
            return l > 0 ? v : !v;
        });
        if (!ok) return false;
    }
    return true;
}

Clause blocking_clause(const CnfFormula& f, const std::vector<bool>& assignment,
                       const std::vector<std::string>& buses)
{
    Clause cl;
    for (const auto& name : buses)
        for (std::uint32_t v : f.varmap.bus_vars(name)) {
            if (v >= assignment.size()) throw InvalidParameter("assignment too short for varmap");
            cl.push_back(assignment[v] ? -static_cast<Literal>(v) : static_cast<Literal>(v));
        }
    if (cl.empty()) throw InvalidParameter("blocking clause over no variables");
    return cl;
}

std::vector<std::uint8_t> bus_bits(const CnfFormula& f, const std::vector<bool>& assignment,
                                   const std::string& bus)
{
    std::vector<std::uint8_t> bits;
    for (std::uint32_t v : f.varmap.bus_vars(bus)) {
        if (v >= assignment.size()) throw InvalidParameter("assignment too short for varmap");
        bits.push_back(assignment[v] ? 1 : 0);
    }
    return bits;
}

}  // namespace smoothsat::cnf

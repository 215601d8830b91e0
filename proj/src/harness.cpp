#include "smoothsat/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "smoothsat/errors.hpp"

namespace smoothsat::harness {

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Timeout: return "timeout";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

/// Temporary DIMACS file removed on scope exit.
class TempCnf {
public:
    explicit TempCnf(const cnf::CnfFormula& f)
    {
        std::string tmpl = (std::filesystem::temp_directory_path() / "smoothsat-XXXXXX.cnf").string();
        const int fd = mkstemps(tmpl.data(), 4);
        if (fd < 0) throw IoFailure("cannot create temporary DIMACS file");
        ::close(fd);
        path_ = tmpl;
        std::ofstream os(path_, std::ios::binary | std::ios::trunc);
        cnf::emit_dimacs(os, f);
        if (!os) throw IoFailure("cannot write " + path_);
    }
    ~TempCnf() { std::remove(path_.c_str()); }
    TempCnf(const TempCnf&) = delete;
    TempCnf& operator=(const TempCnf&) = delete;

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

std::string command_for(const std::string& solver_cmd, const std::string& path)
{
    const auto pos = solver_cmd.find("{}");
    if (pos != std::string::npos) {
        std::string cmd = solver_cmd;
        cmd.replace(pos, 2, "'" + path + "'");
        return cmd;
    }
    return solver_cmd + " '" + path + "'";
}

std::string solver_id_of(const std::string& solver_cmd)
{
    const auto start = solver_cmd.find_first_not_of(' ');
    if (start == std::string::npos) return "";
    const auto end = solver_cmd.find(' ', start);
    const std::string first = solver_cmd.substr(start, end == std::string::npos ? std::string::npos : end - start);
    return std::filesystem::path(first).filename().string();
}

struct Child {
    pid_t pid = -1;
    int fd = -1;
    std::string output;
    bool finished = false;
    bool killed = false;
    int status = 0;
    double elapsed = 0.0;
};

Child spawn(const std::string& command)
{
    int fds[2];
    if (::pipe(fds) != 0) throw SolverSpawnFailure("pipe() failed");
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw SolverSpawnFailure("fork() failed");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], STDOUT_FILENO);
        const int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(fds[1]);
    ::fcntl(fds[0], F_SETFL, ::fcntl(fds[0], F_GETFL) | O_NONBLOCK);
    Child c;
    c.pid = pid;
    c.fd = fds[0];
    return c;
}

void reap(Child& c, bool kill_group)
{
    if (kill_group) {
        ::kill(-c.pid, SIGKILL);
        c.killed = true;
    }
    if (c.fd >= 0) {
        ::close(c.fd);
        c.fd = -1;
    }
    ::waitpid(c.pid, &c.status, 0);
    c.finished = true;
}

/// Drives the children until all finish, the deadline passes, or `stop` says so.
template <class Stop>
void drive(std::vector<Child>& children, Clock::time_point start, double timeout_s, Stop stop)
{
    const auto deadline = start + std::chrono::duration<double>(timeout_s);
    char buf[1 << 15];
    for (;;) {
        std::vector<pollfd> pfds;
        std::vector<std::size_t> owner;
        for (std::size_t i = 0; i < children.size(); ++i)
            if (!children[i].finished) {
                pfds.push_back({children[i].fd, POLLIN, 0});
                owner.push_back(i);
            }
        if (pfds.empty()) return;
        const auto now = Clock::now();
        if (now >= deadline) {
            for (auto& c : children)
                if (!c.finished) {
                    reap(c, true);
                    c.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
                }
            return;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        ::poll(pfds.data(), pfds.size(), static_cast<int>(std::min<long long>(left + 1, 200)));
        for (std::size_t k = 0; k < pfds.size(); ++k) {
            if (!(pfds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            Child& c = children[owner[k]];
            for (;;) {
                const ssize_t n = ::read(c.fd, buf, sizeof buf);
                if (n > 0) {
                    c.output.append(buf, static_cast<std::size_t>(n));
                    continue;
                }
                if (n == 0) {
                    reap(c, false);
                    c.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
                    if (stop(owner[k])) {
                        for (auto& o : children)
                            if (!o.finished) reap(o, true);
                        return;
                    }
                }
                break;
            }
        }
    }
}

SolveResult interpret(const Child& c, const cnf::CnfFormula& f, const std::string& solver_cmd)
{
    SolveResult r;
    r.solver_id = solver_id_of(solver_cmd);
    r.instance_ref = f.varmap.manifest_ref;
    r.wall_time = c.elapsed;
    if (c.killed) {
        r.verdict = Verdict::Timeout;
        return r;
    }
    if (WIFEXITED(c.status) && WEXITSTATUS(c.status) == 127 && c.output.find("s ") == std::string::npos)
        throw SolverSpawnFailure("solver command could not be run: " + solver_cmd);
    const auto ans = cnf::parse_model(c.output, f);
    switch (ans.verdict) {
    case cnf::Verdict::Sat:
        if (!cnf::satisfies(f, ans.assignment))
            throw MalformedOutput("solver model does not satisfy the formula (" + r.solver_id + ")");
        r.verdict = Verdict::Sat;
        r.assignment = ans.assignment;
        break;
    case cnf::Verdict::Unsat: r.verdict = Verdict::Unsat; break;
    case cnf::Verdict::Unknown: r.verdict = Verdict::Unknown; break;
    }
    return r;
}

bool has_empty_clause(const cnf::CnfFormula& f)
{
    return std::any_of(f.clauses.begin(), f.clauses.end(), [](const cnf::Clause& c) { return c.empty(); });
}

}  // namespace

SolveResult solve(const cnf::CnfFormula& f, const std::string& solver_cmd, double timeout_s)
{
    return solve_parallel({f}, solver_cmd, timeout_s);
}

SolveResult solve_parallel(const std::vector<cnf::CnfFormula>& parts, const std::string& solver_cmd,
                           double timeout_s)
{
    if (solver_cmd.empty()) throw SolverSpawnFailure("no solver command configured");
    if (parts.empty()) throw InvalidParameter("no formulas to solve");
    if (!(timeout_s > 0)) throw InvalidParameter("timeout must be positive");

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (!has_empty_clause(parts[i])) live.push_back(i);
    if (live.empty()) {
        SolveResult r;
        r.verdict = Verdict::Unsat;
        r.solver_id = solver_id_of(solver_cmd);
        r.instance_ref = parts.front().varmap.manifest_ref;
        return r;
    }

    std::vector<std::unique_ptr<TempCnf>> files;
    for (std::size_t i : live) files.push_back(std::make_unique<TempCnf>(parts[i]));

    const auto start = Clock::now();
    std::vector<Child> children;
    try {
        for (const auto& file : files) children.push_back(spawn(command_for(solver_cmd, file->path())));
    } catch (...) {
        for (auto& c : children) reap(c, true);
        throw;
    }

    std::optional<SolveResult> sat;
    std::exception_ptr failure;
    drive(children, start, timeout_s, [&](std::size_t i) {
        try {
            auto r = interpret(children[i], parts[live[i]], solver_cmd);
            if (r.verdict == Verdict::Sat) {
                sat = std::move(r);
                return true;
            }
        } catch (...) {
            failure = std::current_exception();
            return true;
        }
        return false;
    });
    if (failure) std::rethrow_exception(failure);
    if (sat) return *sat;

    SolveResult combined;
    combined.verdict = Verdict::Unsat;
    combined.solver_id = solver_id_of(solver_cmd);
    combined.instance_ref = parts.front().varmap.manifest_ref;
    for (std::size_t i = 0; i < children.size(); ++i) {
        const auto r = interpret(children[i], parts[live[i]], solver_cmd);
        combined.wall_time = std::max(combined.wall_time, r.wall_time);
        if (r.verdict == Verdict::Timeout) combined.verdict = Verdict::Timeout;
        else if (r.verdict == Verdict::Unknown && combined.verdict == Verdict::Unsat) combined.verdict = Verdict::Unknown;
    }
    return combined;
}

SmoothnessWitness decode_witness(const std::vector<bool>& assignment, const cnf::CnfFormula& f,
                                 const FactoringInstance& inst)
{
    const auto a_bits = cnf::bus_bits(f, assignment, "a");
    const auto b_bits = cnf::bus_bits(f, assignment, "b");
    if (a_bits.size() > 63 || b_bits.size() > 63) throw InvalidParameter("a/b bus too wide to decode");
    const std::int64_t a = circuit::decode_sign_magnitude(a_bits);
    const Integer b_big = circuit::decode_unsigned(b_bits);
    const auto b = static_cast<std::int64_t>(b_big.get_ui());

    const SearchBox box{inst.u};
    const bool negative_zero = a == 0 && a_bits.back() != 0;
    if (!box.contains(a, b) || negative_zero)
        throw SoundnessViolation("model decodes to (a,b) = (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") outside the search box");

    const Integer F = params::eval_F(inst, a, b);
    const Integer absF = abs(F);
    std::optional<std::vector<std::uint32_t>> exps;
    if (absF != 0) exps = smooth::factor_exponents(absF, inst.y);
    if (!exps)
        throw SoundnessViolation("model claims smoothness but |F(" + std::to_string(a) + "," + std::to_string(b) +
                                 ")| = " + to_string(absF) + " is not " + std::to_string(inst.y) + "-smooth");

    if (gcd(Integer(a), Integer(b)) != 1)
        throw GcdRejected("gcd(" + std::to_string(a) + "," + std::to_string(b) + ") != 1");
    return SmoothnessWitness{a, b, std::move(*exps)};
}

SolveResult solve_instance(const cnf::CnfFormula& f, const FactoringInstance& inst,
                           const std::string& solver_cmd, double timeout_s)
{
    auto r = solve(f, solver_cmd, timeout_s);
    if (r.verdict == Verdict::Sat) r.witness = decode_witness(r.assignment, f, inst);
    return r;
}

Enumeration enumerate(const cnf::CnfFormula& f, const FactoringInstance& inst, const std::string& solver_cmd,
                      std::size_t k, double timeout_s)
{
    if (k == 0) throw InvalidParameter("enumerate needs k >= 1");
    Enumeration out;
    cnf::CnfFormula work = f;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    const auto start = Clock::now();
    while (out.witnesses.size() < k) {
        const double left = timeout_s - std::chrono::duration<double>(Clock::now() - start).count();
        if (left <= 0) {
            out.last = Verdict::Timeout;
            break;
        }
        const auto r = solve(work, solver_cmd, left);
        ++out.solver_calls;
        out.last = r.verdict;
        if (r.verdict != Verdict::Sat) break;
        work.clauses.push_back(cnf::blocking_clause(work, r.assignment, {"a", "b"}));
        try {
            auto w = decode_witness(r.assignment, work, inst);
            if (!seen.insert({w.a, w.b}).second)
                throw SoundnessViolation("solver repeated a blocked (a,b) pair");
            out.witnesses.push_back(std::move(w));
        } catch (const GcdRejected&) {
            ++out.gcd_rejected;
        }
    }
    return out;
}

cnf::CnfFormula partition_b(const cnf::CnfFormula& f, unsigned part, unsigned parts)
{
    if (parts == 0 || (parts & (parts - 1)) != 0) throw InvalidParameter("partition count must be a power of two");
    if (part >= parts) throw InvalidParameter("partition index out of range");
    const auto vars = f.varmap.bus_vars("b");
    const unsigned bits = static_cast<unsigned>(bitlen(static_cast<std::uint64_t>(parts)) - 1);
    if (bits > vars.size()) throw InvalidParameter("more partitions than b values");
    cnf::CnfFormula g = f;
    for (unsigned i = 0; i < bits; ++i) {
        const auto v = static_cast<cnf::Literal>(vars[i]);
        g.clauses.push_back({((part >> i) & 1u) ? v : -v});
    }
    return g;
}

std::vector<Integer> bench_sizes(const Integer& from, const Integer& to, unsigned per_octave)
{
    if (from < 3 || to < from) throw InvalidParameter("bench range must satisfy 3 <= from <= to");
    if (per_octave == 0) throw InvalidParameter("per_octave must be positive");
    std::vector<Integer> out;
    const double span = (log(to) - log(from)) / std::log(2.0);
    const auto steps = static_cast<long>(std::floor(span * per_octave + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        Integer c;
        if (i % per_octave == 0) {
            c = from << static_cast<mp_bitcnt_t>(i / per_octave);
        } else {
            mpf_class x(from, 256);
            x *= std::exp2(static_cast<double>(i) / per_octave);
            c = x;
        }
        if (c % 2 == 0) c = c + 1 <= to ? Integer(c + 1) : Integer(c - 1);
        if (c < from || c > to) continue;
        if (out.empty() || out.back() != c) out.push_back(c);
    }
    return out;
}

circuit::BoolCircuit build_family(circuit::Family family, const FactoringInstance& inst,
                                  const ecm::ScheduleConfig& ecm_config)
{
    switch (family) {
    case circuit::Family::VarExp: return circuit::build_varexp_circuit(inst);
    case circuit::Family::VarFactor: return circuit::build_varfactor_circuit(inst);
    case circuit::Family::Ecm: return circuit::build_ecm_circuit(inst, ecm::make_schedule(inst, ecm_config));
    }
    throw InvalidParameter("unknown circuit family");
}

double median(std::vector<double> xs)
{
    if (xs.empty() || xs.size() % 2 == 0) throw InvalidParameter("median needs an odd, non-empty sample");
    const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    return *mid;
}

std::vector<BenchRecord> bench(const std::vector<Integer>& Ns, circuit::Family family,
                               const std::string& solver_cmd, const BenchOptions& options, std::ostream* progress)
{
    if (options.reps == 0 || options.reps % 2 == 0) throw InvalidParameter("reps must be odd");
    const auto profile = analysis::closed_form(options.gamma);
    std::vector<BenchRecord> records;
    for (const auto& N : Ns) {
        const auto inst = params::derive_instance(N, profile);
        const std::string manifest = params::manifest_string(inst);
        std::string manifest_ref;
        if (!options.manifest_dir.empty()) {
            std::filesystem::create_directories(options.manifest_dir);
            manifest_ref = (std::filesystem::path(options.manifest_dir) /
                            ("N" + to_string(N) + "-" + circuit::family_name(family) + ".manifest"))
                               .string();
            params::save_manifest(manifest_ref, inst);
        }
        auto c = build_family(family, inst, options.ecm);
        c.manifest_ref = manifest_ref;
        const auto formula = cnf::simplify(cnf::tseitin(c)).formula;

        std::vector<cnf::CnfFormula> parts;
        if (options.partitions > 1)
            for (unsigned p = 0; p < options.partitions; ++p) parts.push_back(partition_b(formula, p, options.partitions));

        BenchRecord rec;
        rec.N = N;
        rec.family = family;
        rec.y = inst.y;
        rec.u = inst.u;
        rec.d = inst.d;
        rec.reps = options.reps;
        rec.manifest = manifest;
        rec.verdict = Verdict::Sat;
        std::vector<double> times;
        for (unsigned r = 0; r < options.reps; ++r) {
            SolveResult res = options.partitions > 1 ? solve_parallel(parts, solver_cmd, options.timeout_s)
                                                     : solve(formula, solver_cmd, options.timeout_s);
            if (res.verdict == Verdict::Sat) {
                // A non-coprime pair is still a verified smooth point; only the
                // relation is useless, which does not matter for timing.
                try {
                    decode_witness(res.assignment, formula, inst);
                } catch (const GcdRejected&) {
                }
            }
            rec.solver_id = res.solver_id;
            if (res.verdict == Verdict::Timeout) {
                times.push_back(options.timeout_s);
                rec.verdict = Verdict::Timeout;
            } else {
                times.push_back(res.wall_time);
                if (res.verdict != Verdict::Sat && rec.verdict == Verdict::Sat) rec.verdict = res.verdict;
            }
        }
        rec.median_time = median(times);
        rec.normalized_time = rec.median_time * static_cast<double>(inst.y);
        if (progress)
            *progress << "N=" << to_string(N) << " y=" << inst.y << " u=" << inst.u << " d=" << inst.d
                      << " vars=" << formula.num_vars << " clauses=" << formula.clauses.size()
                      << " median=" << rec.median_time << "s " << verdict_name(rec.verdict) << '\n';
        records.push_back(std::move(rec));
    }
    return records;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records)
{
    os << bench_csv_header << '\n';
    char buf[64];
    for (const auto& r : records) {
        os << to_string(r.N) << ',' << circuit::family_name(r.family) << ',' << r.y << ',' << r.u << ',' << r.d
           << ',' << r.reps << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.median_time);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.normalized_time);
        os << buf << ',' << verdict_name(r.verdict) << '\n';
    }
}

std::string default_solver()
{
    const char* env = std::getenv("SMOOTHSAT_SOLVER");
    return env ? std::string(env) : std::string();
}

}  // namespace smoothsat::harness

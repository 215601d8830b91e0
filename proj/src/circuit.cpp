#include "smoothsat/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "smoothsat/errors.hpp"

namespace smoothsat::circuit {

const char* kind_name(GateKind k)
{
    switch (k) {
    case GateKind::Input: return "INPUT";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Xor: return "XOR";
    case GateKind::Not: return "NOT";
    }
    return "?";
}

std::size_t BoolCircuit::input_bit_count() const
{
    std::size_t n = 0;
    for (const auto& b : buses) {
        n += b.width();
    }
    return n;
}

std::size_t BoolCircuit::gate_count() const
{
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind != GateKind::Input && g.kind != GateKind::Const0 &&
               g.kind != GateKind::Const1;
    }));
}

const InputBus& BoolCircuit::bus(const std::string& name) const
{
    for (const auto& b : buses) {
        if (b.name == name) {
            return b;
        }
    }
    throw InvalidParameter("circuit has no input bus '" + name + "'");
}

bool BoolCircuit::has_bus(const std::string& name) const
{
    return std::any_of(buses.begin(), buses.end(), [&](const InputBus& b) { return b.name == name; });
}

std::size_t input_bit_count(const BoolCircuit& c) { return c.input_bit_count(); }

// ---------------------------------------------------------------------------
// Builder

Builder::Builder() = default;

Wire Builder::push(GateKind kind, Wire in0, Wire in1)
{
    if (gates_.size() >= 0xFFFFFFF0U) {
        throw InvalidParameter("circuit exceeds 2^32 wires");
    }
    gates_.push_back({kind, in0, in1});
    return static_cast<Wire>(gates_.size() - 1);
}

Bits Builder::add_input(const std::string& name, const std::string& role, std::size_t width)
{
    if (logic_started_) {
        throw InvalidParameter("inputs must be declared before any gate");
    }
    if (width == 0) {
        throw InvalidParameter("input bus '" + name + "' has zero width");
    }
    if (name.find_first_of(": \t\n") != std::string::npos ||
        role.find_first_of(": \t\n") != std::string::npos || name.empty() || role.empty()) {
        throw InvalidParameter("bus name/role must be non-empty and free of ':' and spaces");
    }
    for (const auto& b : buses_) {
        if (b.name == name) {
            throw InvalidParameter("duplicate input bus '" + name + "'");
        }
    }
    InputBus bus;
    bus.name = name;
    bus.role = role;
    bus.signedness = role == "a" ? Signedness::SignMagnitude : Signedness::Unsigned;
    for (std::size_t i = 0; i < width; ++i) {
        bus.wires.push_back(push(GateKind::Input));
    }
    buses_.push_back(bus);
    return bus.wires;
}

Wire Builder::zero()
{
    if (!have_const0_) {
        logic_started_ = true;
        const0_ = push(GateKind::Const0);
        have_const0_ = true;
    }
    return const0_;
}

Wire Builder::one()
{
    if (!have_const1_) {
        logic_started_ = true;
        const1_ = push(GateKind::Const1);
        have_const1_ = true;
    }
    return const1_;
}

bool Builder::is_const(Wire w) const
{
    const auto k = gates_[w].kind;
    return k == GateKind::Const0 || k == GateKind::Const1;
}

bool Builder::const_value(Wire w) const { return gates_[w].kind == GateKind::Const1; }

Wire Builder::not_(Wire x)
{
    if (is_const(x)) {
        return constant(!const_value(x));
    }
    if (gates_[x].kind == GateKind::Not) {
        return gates_[x].in0;
    }
    logic_started_ = true;
    return push(GateKind::Not, x);
}

namespace {

bool complementary(const std::vector<Gate>& g, Wire x, Wire y)
{
    return (g[x].kind == GateKind::Not && g[x].in0 == y) ||
           (g[y].kind == GateKind::Not && g[y].in0 == x);
}

}  // namespace

Wire Builder::and_(Wire x, Wire y)
{
    if (is_const(x)) {
        return const_value(x) ? y : zero();
    }
    if (is_const(y)) {
        return const_value(y) ? x : zero();
    }
    if (x == y) {
        return x;
    }
    if (complementary(gates_, x, y)) {
        return zero();
    }
    logic_started_ = true;
    return push(GateKind::And, std::min(x, y), std::max(x, y));
}

Wire Builder::or_(Wire x, Wire y)
{
    if (is_const(x)) {
        return const_value(x) ? one() : y;
    }
    if (is_const(y)) {
        return const_value(y) ? one() : x;
    }
    if (x == y) {
        return x;
    }
    if (complementary(gates_, x, y)) {
        return one();
    }
    logic_started_ = true;
    return push(GateKind::Or, std::min(x, y), std::max(x, y));
}

Wire Builder::xor_(Wire x, Wire y)
{
    if (is_const(x)) {
        return const_value(x) ? not_(y) : y;
    }
    if (is_const(y)) {
        return const_value(y) ? not_(x) : x;
    }
    if (x == y) {
        return zero();
    }
    if (complementary(gates_, x, y)) {
        return one();
    }
    logic_started_ = true;
    return push(GateKind::Xor, std::min(x, y), std::max(x, y));
}

BoolCircuit Builder::finish(Wire output, std::size_t width, std::string manifest_ref)
{
    if (output >= gates_.size()) {
        throw InvalidParameter("output wire out of range");
    }
    BoolCircuit c;
    c.gates = std::move(gates_);
    c.buses = std::move(buses_);
    c.output = output;
    c.width = width;
    c.manifest_ref = std::move(manifest_ref);

    std::vector<bool> used(c.gates.size(), false);
    used[output] = true;
    for (const auto& g : c.gates) {
        switch (g.kind) {
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor:
            used[g.in0] = true;
            used[g.in1] = true;
            break;
        case GateKind::Not:
            used[g.in0] = true;
            break;
        default:
            break;
        }
    }
    for (const auto& b : c.buses) {
        for (auto w : b.wires) {
            if (!used[w]) {
                c.dead_inputs.push_back(w);
            }
        }
    }
    std::sort(c.dead_inputs.begin(), c.dead_inputs.end());

    gates_.clear();
    buses_.clear();
    have_const0_ = have_const1_ = logic_started_ = false;
    return c;
}

// ---------------------------------------------------------------------------
// Bus values

BusValue encode_unsigned(const Integer& v, std::size_t width)
{
    if (sgn(v) < 0 || bitlen(v) > width) {
        throw InvalidParameter("value " + to_string(v) + " does not fit in " +
                               std::to_string(width) + " unsigned bits");
    }
    BusValue bv;
    bv.bits.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
        bv.bits[i] = test_bit(v, i) ? 1 : 0;
    }
    return bv;
}

BusValue encode_sign_magnitude(std::int64_t v, std::size_t width)
{
    if (width < 2) {
        throw InvalidParameter("sign-magnitude bus needs at least 2 bits");
    }
    const std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
    BusValue bv = encode_unsigned(Integer(static_cast<unsigned long>(mag)), width - 1);
    bv.bits.push_back(v < 0 ? 1 : 0);
    bv.signedness = Signedness::SignMagnitude;
    return bv;
}

Integer decode_unsigned(std::span<const std::uint8_t> bits)
{
    Integer v = 0;
    for (std::size_t i = bits.size(); i-- > 0;) {
        v <<= 1;
        if (bits[i] != 0) {
            v += 1;
        }
    }
    return v;
}

std::int64_t decode_sign_magnitude(std::span<const std::uint8_t> bits)
{
    if (bits.size() < 2) {
        throw InvalidParameter("sign-magnitude bus needs at least 2 bits");
    }
    const Integer mag = decode_unsigned(bits.first(bits.size() - 1));
    if (bitlen(mag) > 62) {
        throw InvalidParameter("sign-magnitude value exceeds 62 bits");
    }
    const auto m = static_cast<std::int64_t>(mag.get_si());
    return bits.back() != 0 ? -m : m;
}

// ---------------------------------------------------------------------------
// Simulation

std::vector<std::uint64_t> simulate_lanes(const BoolCircuit& c,
                                          std::span<const std::uint64_t> input_words)
{
    const std::size_t n_inputs = c.input_bit_count();
    if (input_words.size() != n_inputs) {
        throw InvalidParameter("simulate_lanes: expected " + std::to_string(n_inputs) +
                               " input words, got " + std::to_string(input_words.size()));
    }
    std::vector<std::uint64_t> v(c.gates.size(), 0);
    std::size_t next_input = 0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        switch (g.kind) {
        case GateKind::Input: v[i] = input_words[next_input++]; break;
        case GateKind::Const0: v[i] = 0; break;
        case GateKind::Const1: v[i] = ~std::uint64_t{0}; break;
        case GateKind::And: v[i] = v[g.in0] & v[g.in1]; break;
        case GateKind::Or: v[i] = v[g.in0] | v[g.in1]; break;
        case GateKind::Xor: v[i] = v[g.in0] ^ v[g.in1]; break;
        case GateKind::Not: v[i] = ~v[g.in0]; break;
        }
    }
    return v;
}

Integer lane_value(std::span<const std::uint64_t> words, const Bits& bits, unsigned lane)
{
    std::vector<std::uint8_t> b(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        b[i] = static_cast<std::uint8_t>((words[bits[i]] >> lane) & 1U);
    }
    return decode_unsigned(b);
}

SimResult simulate(const BoolCircuit& c, const std::map<std::string, BusValue>& inputs)
{
    for (const auto& [name, _] : inputs) {
        if (!c.has_bus(name)) {
            throw InvalidParameter("simulate: unknown bus '" + name + "'");
        }
    }
    std::vector<std::uint64_t> words;
    words.reserve(c.input_bit_count());
    for (const auto& bus : c.buses) {
        auto it = inputs.find(bus.name);
        if (it == inputs.end()) {
            throw InvalidParameter("simulate: bus '" + bus.name + "' is unbound");
        }
        if (it->second.bits.size() != bus.width()) {
            throw InvalidParameter("simulate: bus '" + bus.name + "' expects " +
                                   std::to_string(bus.width()) + " bits, got " +
                                   std::to_string(it->second.bits.size()));
        }
        for (auto bit : it->second.bits) {
            words.push_back(bit != 0 ? 1U : 0U);
        }
    }
    const auto v = simulate_lanes(c, words);
    SimResult r;
    r.wires.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        r.wires[i] = static_cast<std::uint8_t>(v[i] & 1U);
    }
    r.output = r.wires[c.output] != 0;
    return r;
}

std::vector<std::uint64_t> pack_lanes(const BoolCircuit& c, std::span<const InputPoint> points)
{
    if (points.size() > 64) {
        throw InvalidParameter("pack_lanes takes at most 64 points");
    }
    std::vector<std::uint64_t> words(c.input_bit_count(), 0);
    for (std::size_t lane = 0; lane < points.size(); ++lane) {
        std::size_t offset = 0;
        for (const auto& bus : c.buses) {
            auto it = points[lane].find(bus.name);
            if (it == points[lane].end() || it->second.bits.size() != bus.width()) {
                throw InvalidParameter("pack_lanes: bus '" + bus.name + "' unbound or wrong width");
            }
            for (std::size_t i = 0; i < bus.width(); ++i) {
                words[offset + i] |= static_cast<std::uint64_t>(it->second.bits[i] & 1U) << lane;
            }
            offset += bus.width();
        }
    }
    return words;
}

// ---------------------------------------------------------------------------
// Text format

void dump(std::ostream& os, const BoolCircuit& c)
{
    os << "c inputs";
    for (const auto& b : c.buses) {
        os << " bus:" << b.name << ':' << b.width() << ':' << b.role;
    }
    os << '\n';
    os << "c meta width " << c.width << " manifest " << (c.manifest_ref.empty() ? "-" : c.manifest_ref)
       << '\n';
    if (!c.dead_inputs.empty()) {
        os << "c dead";
        for (auto w : c.dead_inputs) {
            os << ' ' << w;
        }
        os << '\n';
    }
    const std::size_t n_inputs = c.input_bit_count();
    for (std::size_t i = n_inputs; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        os << i << ' ' << kind_name(g.kind);
        if (g.kind == GateKind::Not) {
            os << ' ' << g.in0;
        } else if (g.kind != GateKind::Const0 && g.kind != GateKind::Const1) {
            os << ' ' << g.in0 << ' ' << g.in1;
        }
        os << '\n';
    }
    os << "out " << c.output << '\n';
}

std::string dump_string(const BoolCircuit& c)
{
    std::ostringstream os;
    dump(os, c);
    return os.str();
}

namespace {

GateKind parse_kind(const std::string& s)
{
    static const std::unordered_map<std::string, GateKind> kinds = {
        {"CONST0", GateKind::Const0}, {"CONST1", GateKind::Const1}, {"AND", GateKind::And},
        {"OR", GateKind::Or},         {"XOR", GateKind::Xor},       {"NOT", GateKind::Not}};
    auto it = kinds.find(s);
    if (it == kinds.end()) {
        throw InvalidParameter("circuit parse: unknown gate kind '" + s + "'");
    }
    return it->second;
}

}  // namespace

BoolCircuit parse(std::istream& is)
{
    BoolCircuit c;
    std::string line;
    if (!std::getline(is, line) || line.rfind("c inputs", 0) != 0) {
        throw InvalidParameter("circuit parse: missing 'c inputs' header");
    }
    {
        std::istringstream ls(line.substr(8));
        std::string tok;
        Wire next = 0;
        while (ls >> tok) {
            // bus:<name>:<width>:<role>
            std::vector<std::string> parts;
            std::size_t start = 0;
            for (std::size_t pos; (pos = tok.find(':', start)) != std::string::npos; start = pos + 1) {
                parts.push_back(tok.substr(start, pos - start));
            }
            parts.push_back(tok.substr(start));
            if (parts.size() != 4 || parts[0] != "bus") {
                throw InvalidParameter("circuit parse: bad bus token '" + tok + "'");
            }
            InputBus bus;
            bus.name = parts[1];
            bus.role = parts[3];
            bus.signedness = bus.role == "a" ? Signedness::SignMagnitude : Signedness::Unsigned;
            if (parts[2].empty() || parts[2].find_first_not_of("0123456789") != std::string::npos) {
                throw InvalidParameter("circuit parse: bad bus width in '" + tok + "'");
            }
            const auto width = std::stoul(parts[2]);
            if (width == 0) {
                throw InvalidParameter("circuit parse: zero-width bus");
            }
            for (unsigned long i = 0; i < width; ++i) {
                bus.wires.push_back(next++);
                c.gates.push_back({GateKind::Input, 0, 0});
            }
            c.buses.push_back(std::move(bus));
        }
    }
    bool have_out = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "c") {
            std::string what;
            ls >> what;
            if (what == "meta") {
                std::string k1;
                std::string k2;
                std::string ref;
                if (!(ls >> k1 >> c.width >> k2 >> ref) || k1 != "width" || k2 != "manifest") {
                    throw InvalidParameter("circuit parse: bad meta line");
                }
                c.manifest_ref = ref == "-" ? "" : ref;
            } else if (what == "dead") {
                Wire w = 0;
                while (ls >> w) {
                    c.dead_inputs.push_back(w);
                }
            }
            continue;
        }
        if (have_out) {
            throw InvalidParameter("circuit parse: content after 'out' line");
        }
        if (head == "out") {
            if (!(ls >> c.output) || c.output >= c.gates.size()) {
                throw InvalidParameter("circuit parse: bad output line");
            }
            have_out = true;
            continue;
        }
        if (head.find_first_not_of("0123456789") != std::string::npos) {
            throw InvalidParameter("circuit parse: unexpected line '" + line + "'");
        }
        const auto idx = std::stoull(head);
        if (idx != c.gates.size()) {
            throw InvalidParameter("circuit parse: gate index " + head + " out of sequence");
        }
        std::string kind_s;
        ls >> kind_s;
        Gate g;
        g.kind = parse_kind(kind_s);
        const std::size_t arity =
            g.kind == GateKind::Not ? 1 : (g.kind == GateKind::Const0 || g.kind == GateKind::Const1 ? 0 : 2);
        if (arity >= 1 && !(ls >> g.in0)) {
            throw InvalidParameter("circuit parse: missing operand on line '" + line + "'");
        }
        if (arity == 2 && !(ls >> g.in1)) {
            throw InvalidParameter("circuit parse: missing operand on line '" + line + "'");
        }
        if ((arity >= 1 && g.in0 >= idx) || (arity == 2 && g.in1 >= idx)) {
            throw InvalidParameter("circuit parse: gate " + head + " references a later wire");
        }
        c.gates.push_back(g);
    }
    if (!have_out) {
        throw InvalidParameter("circuit parse: missing 'out' line");
    }
    return c;
}

BoolCircuit load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open circuit file " + path);
    }
    return parse(in);
}

void save(const std::string& path, const BoolCircuit& c)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot write circuit file " + path);
    }
    dump(out, c);
    if (!out) {
        throw IoFailure("write failed for circuit file " + path);
    }
}

}  // namespace smoothsat::circuit

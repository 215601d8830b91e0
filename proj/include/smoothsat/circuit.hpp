#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "smoothsat/integer.hpp"

namespace smoothsat::circuit {

enum class GateKind : std::uint8_t { Input, Const0, Const1, And, Or, Xor, Not };

const char* kind_name(GateKind k);

using Wire = std::uint32_t;

/// A wire's producing gate. Wires are gate indices; inputs come first.
struct Gate {
    GateKind kind = GateKind::Input;
    Wire in0 = 0;
    Wire in1 = 0;

    bool operator==(const Gate&) const = default;
};

enum class Signedness : std::uint8_t { Unsigned, SignMagnitude };

/// Named group of input wires, LSB first. Sign-magnitude buses keep the sign in the
/// top bit.
struct InputBus {
    std::string name;
    std::string role;  ///< "a", "b", "e", "q" for the smoothness families
    std::vector<Wire> wires;
    Signedness signedness = Signedness::Unsigned;

    std::size_t width() const { return wires.size(); }
    bool operator==(const InputBus&) const = default;
};

/// Topologically ordered gate list with named input buses and a single output.
struct BoolCircuit {
    std::vector<Gate> gates;
    std::vector<InputBus> buses;
    Wire output = 0;
    std::vector<Wire> dead_inputs;  ///< input wires no gate reads
    std::size_t width = 0;          ///< truncation width w
    std::string manifest_ref;

    std::size_t wire_count() const { return gates.size(); }
    std::size_t input_bit_count() const;
    /// Logic gates only (no inputs, no constants).
    std::size_t gate_count() const;
    const InputBus& bus(const std::string& name) const;
    bool has_bus(const std::string& name) const;

    bool operator==(const BoolCircuit&) const = default;
};

/// Sum of input-bus widths.
std::size_t input_bit_count(const BoolCircuit& c);

using Bits = std::vector<Wire>;

/// Incremental circuit construction with constant folding.
///
/// All inputs must be declared before the first logic gate so that input wires
/// occupy the lowest indices.
class Builder {
public:
    Builder();

    /// Buses with role "a" are sign-magnitude; every other role is unsigned.
    Bits add_input(const std::string& name, const std::string& role, std::size_t width);

    Wire zero();
    Wire one();
    Wire constant(bool v) { return v ? one() : zero(); }

    Wire and_(Wire x, Wire y);
    Wire or_(Wire x, Wire y);
    Wire xor_(Wire x, Wire y);
    Wire not_(Wire x);

    bool is_const(Wire w) const;
    bool const_value(Wire w) const;  ///< only meaningful when is_const(w)

    std::size_t size() const { return gates_.size(); }

    BoolCircuit finish(Wire output, std::size_t width = 0, std::string manifest_ref = {});

private:
    Wire push(GateKind kind, Wire in0 = 0, Wire in1 = 0);

    std::vector<Gate> gates_;
    std::vector<InputBus> buses_;
    Wire const0_ = 0;
    Wire const1_ = 0;
    bool have_const0_ = false;
    bool have_const1_ = false;
    bool logic_started_ = false;
};

/// Value bound to one input bus, LSB first.
struct BusValue {
    std::vector<std::uint8_t> bits;
    Signedness signedness = Signedness::Unsigned;
};

BusValue encode_unsigned(const Integer& v, std::size_t width);
BusValue encode_sign_magnitude(std::int64_t v, std::size_t width);
Integer decode_unsigned(std::span<const std::uint8_t> bits);
std::int64_t decode_sign_magnitude(std::span<const std::uint8_t> bits);

struct SimResult {
    bool output = false;
    std::vector<std::uint8_t> wires;
};

/// Evaluates the circuit on one input point. Throws InvalidParameter if a bus is
/// unbound, unknown, or bound with the wrong width.
SimResult simulate(const BoolCircuit& c, const std::map<std::string, BusValue>& inputs);

/// 64 input points at once: one word per input wire (bit k = lane k), in wire order.
/// Returns one word per wire.
std::vector<std::uint64_t> simulate_lanes(const BoolCircuit& c,
                                          std::span<const std::uint64_t> input_words);

/// Reads an unsigned value from lane `lane` of a bitsliced wire trace.
Integer lane_value(std::span<const std::uint64_t> words, const Bits& bits, unsigned lane);

void dump(std::ostream& os, const BoolCircuit& c);
std::string dump_string(const BoolCircuit& c);
/// Inverse of dump(); validates topological order and references.
BoolCircuit parse(std::istream& is);
BoolCircuit load(const std::string& path);
void save(const std::string& path, const BoolCircuit& c);

}  // namespace smoothsat::circuit

namespace smoothsat::circuit {

using InputPoint = std::map<std::string, BusValue>;

/// Packs up to 64 input points into per-wire lane words for simulate_lanes().
std::vector<std::uint64_t> pack_lanes(const BoolCircuit& c, std::span<const InputPoint> points);

}  // namespace smoothsat::circuit

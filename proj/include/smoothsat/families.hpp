#pragma once

#include <cstdint>
#include <vector>

#include "smoothsat/circuit.hpp"
#include "smoothsat/ecm.hpp"
#include "smoothsat/params.hpp"

/// The three smoothness-detection circuit families over a FactoringInstance.
///
/// Every family takes `a` as a sign-magnitude bus of 1 + bitlen(u) bits (sign on top)
/// and `b` as an unsigned bus of bitlen(u) bits. Range checks (|a| <= u, 0 < b <= u,
/// no negative zero) are ANDed into the output; gcd(a, b) is not checked.
namespace smoothsat::circuit {

struct FBlock {
    Bits abs_f;   ///< |F(a,b)|, width bitlen(bound_F)
    Wire in_box;  ///< (a,b) inside the search box
};

/// |(a + b m) g(a,b)| with g evaluated by homogeneous Horner in two's complement.
FBlock build_F_block(Builder& b, const FactoringInstance& inst, const Bits& a_bus, const Bits& b_bus);

/// Declares the a and b buses on a fresh builder.
std::pair<Bits, Bits> add_ab_inputs(Builder& b, const FactoringInstance& inst);

struct FProbe {
    BoolCircuit circuit;  ///< output = in_box
    Bits abs_f;           ///< wires carrying |F(a,b)|
};
FProbe build_F_circuit(const FactoringInstance& inst);

std::size_t a_width(const FactoringInstance& inst);
std::size_t b_width(const FactoringInstance& inst);
/// bitlen(bound_F); each exponent needs ceil(log2(w + 1)) = bitlen(w) bits.
std::size_t exponent_width(const FactoringInstance& inst);
/// Bits per variable factor: bitlen of the largest prime <= y.
std::size_t factor_width(const FactoringInstance& inst);
/// Number of variable factors: floor(log2 bound_F).
std::size_t factor_count(const FactoringInstance& inst);

/// Inputs a, b, e1..e_pi(y). Output: prod p_i^e_i == |F(a,b)| without overflow.
BoolCircuit build_varexp_circuit(const FactoringInstance& inst);

/// Inputs a, b, q1..q_n. Zero factors count as 1. Output: prod q_i == |F(a,b)|,
/// every q_i <= y, no overflow.
BoolCircuit build_varfactor_circuit(const FactoringInstance& inst);

/// Inputs a, b only: the gate-unrolled reference ECM pipeline over |F(a,b)|.
/// Output: running value == 1 after all blocks. Throws InvalidParameter if the
/// schedule width does not match the instance.
BoolCircuit build_ecm_circuit(const FactoringInstance& inst, const ecm::EcmSchedule& schedule);

enum class Family { VarExp, VarFactor, Ecm };
const char* family_name(Family f);
Family parse_family(const std::string& s);

/// Bus values for (a, b) alone.
InputPoint ab_point(const BoolCircuit& c, std::int64_t a, std::int64_t b);
/// (a, b) plus exponent buses from a witness exponent vector.
InputPoint varexp_point(const BoolCircuit& c, std::int64_t a, std::int64_t b,
                        const std::vector<std::uint32_t>& exponents);
/// (a, b) plus factor buses; missing trailing factors are bound to 0 (i.e. 1).
InputPoint varfactor_point(const BoolCircuit& c, std::int64_t a, std::int64_t b,
                           const std::vector<std::uint64_t>& factors);

/// Prime factors of n (with multiplicity) as a factor list for varfactor_point.
std::vector<std::uint64_t> prime_factor_list(const std::vector<std::uint64_t>& primes,
                                             const std::vector<std::uint32_t>& exponents);

}  // namespace smoothsat::circuit

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smoothsat/integer.hpp"
#include "smoothsat/params.hpp"

namespace smoothsat::ecm {

/// Curve y^2 = x^3 + a x + b over Z/nZ through (x0, y0).
struct EcmCurve {
    Integer a_param;
    Integer x0;
    Integer y0;
    Integer b_param;  ///< y0^2 - x0^3 - a x0 mod n
    Integer n;

    bool operator==(const EcmCurve&) const = default;
};

/// Knobs for the block schedule. B = ceil((c + c2 ln ln N) (ln N)^(2/3) (ln ln N)^(1/3))
/// unless `blocks` overrides it.
struct ScheduleConfig {
    double c = 3.0;
    double c2 = 1.0;
    unsigned b1 = 11;
    std::optional<std::uint64_t> blocks;
};

/// Fixed block structure shared by the reference pipeline and the ECM circuit.
struct EcmSchedule {
    std::uint64_t blocks = 0;               ///< B
    std::uint64_t divisions_per_block = 0;  ///< E_max = bitlen(bound_F)
    unsigned stage1_bound = 0;              ///< B1
    std::vector<bool> k_bits;               ///< lcm(1..B1), MSB first
    std::uint64_t seed = 0;
    std::size_t width = 0;                  ///< residue width; bitlen(bound_F) for circuits

    bool operator==(const EcmSchedule&) const = default;
};

std::uint64_t blocks_for(const Integer& N, double c, double c2);

/// lcm(1..b1).
Integer stage1_scalar(unsigned b1);
std::vector<bool> scalar_bits(const Integer& k);

/// Schedule for circuits over `inst` (width and E_max from bound_F, seed from inst).
EcmSchedule make_schedule(const FactoringInstance& inst, const ScheduleConfig& config = {});

/// Schedule for running the reference on a bare integer n (width = bitlen(n)).
EcmSchedule make_schedule_for(const Integer& n, std::uint64_t seed, const ScheduleConfig& config = {});

/// 64-bit avalanche mixer (shift-xor-multiply).
std::uint64_t mix64(std::uint64_t z);

/// Raw `width`-bit curve constant `param` (0 = a, 1 = x0, 2 = y0) for a block,
/// assembled from consecutive mixer words, least significant word first.
Integer prng_constant(std::uint64_t seed, std::uint64_t block_index, unsigned param,
                      std::size_t width);

/// Deterministic curve for (seed, block); constants are width-bit draws reduced mod n.
/// width = 0 means bitlen(n).
EcmCurve curve_from_seed(std::uint64_t seed, std::uint64_t block_index, const Integer& n,
                         std::size_t width = 0);

struct Stage1Outcome {
    Integer z;  ///< Z coordinate of k P
    Integer g;  ///< gcd(Z, n)
    Integer n;
    /// 1 < g < n
    bool factor_found() const { return g > 1 && g < n; }
};

/// k P over projective coordinates mod n, then gcd(Z, n). No modular inversion.
Stage1Outcome stage1(const EcmCurve& curve, const std::vector<bool>& k_bits);

/// One curve attempt: returns g = gcd(Z, n) when 1 < g <= y (g may be composite, and
/// may equal n when n <= y).
std::optional<Integer> find_small_factor(const Integer& n, std::uint64_t y,
                                         const EcmSchedule& schedule, std::uint64_t block_index);

struct BlockTrace {
    std::uint64_t index = 0;
    EcmCurve curve;
    Integer g;
    unsigned divisions = 0;
    Integer value_after;
};

struct PipelineResult {
    Integer final_value;
    std::vector<BlockTrace> trace;
};

/// B blocks of (curve attempt, up to E_max exact divisions by the found divisor).
/// final_value == 1 implies n was y-smooth. n == 0 passes through unchanged.
PipelineResult reference_pipeline(const Integer& n, std::uint64_t y, const EcmSchedule& schedule);

/// `block i: a=<..> x0=<..> y0=<..> g=<..> divs=<k> n'=<..>` per line.
void write_trace(std::ostream& os, const std::vector<BlockTrace>& trace);

enum class ProbabilityMode { Exact, Normal };

/// P[X >= omega_needed] for X ~ Binomial(B, p); Normal uses the erf approximation
/// without continuity correction.
double success_probability(std::uint64_t blocks, std::uint64_t omega_needed, double p,
                           ProbabilityMode mode);

/// ln(B * E_max * K(y) * M(N) * ln N) with y = L_N[1/3, beta], K(y) = L_y[1/2, sqrt 2],
/// M(N) = ln N, B and E_max from the default schedule constants.
double circuit_size_estimate(const FactoringInstance& inst, double beta,
                             const ScheduleConfig& config = {});

}  // namespace smoothsat::ecm

#include "smoothsat/ecm.hpp"

#include <cmath>
#include <ostream>

#include "smoothsat/errors.hpp"
#include "smoothsat/weierstrass.hpp"

namespace smoothsat::ecm {

namespace {

// Residues mod n with the same reduction semantics as the gate-level field.
struct ModField {
    using Elem = Integer;
    Integer n;

    Elem reduce(const Integer& x) const
    {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    Elem add(const Elem& x, const Elem& y) const { return reduce(x + y); }
    Elem sub(const Elem& x, const Elem& y) const { return reduce(x - y); }
    Elem mul(const Elem& x, const Elem& y) const { return reduce(x * y); }
    Elem one() const { return reduce(1); }
};

}  // namespace

std::uint64_t blocks_for(const Integer& N, double c, double c2)
{
    if (!(c > 0.0) || !(c2 >= 0.0)) {
        throw InvalidParameter("schedule constants need c > 0, c2 >= 0");
    }
    const double ln_n = smoothsat::log(N);
    const double lnln = std::log(ln_n);
    if (!(lnln > 0.0)) {
        throw InvalidParameter("schedule needs N > e");
    }
    const double b = (c + c2 * lnln) * std::pow(ln_n, 2.0 / 3.0) * std::cbrt(lnln);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(b)));
}

Integer stage1_scalar(unsigned b1)
{
    if (b1 < 2) {
        throw InvalidParameter("stage-1 bound B1 must be >= 2");
    }
    Integer k = 1;
    for (unsigned i = 2; i <= b1; ++i) {
        mpz_lcm_ui(k.get_mpz_t(), k.get_mpz_t(), i);
    }
    return k;
}

std::vector<bool> scalar_bits(const Integer& k)
{
    std::vector<bool> bits;
    for (std::size_t i = bitlen(k); i-- > 0;) {
        bits.push_back(test_bit(k, i));
    }
    return bits;
}

namespace {

EcmSchedule schedule_common(const Integer& N, std::uint64_t seed, std::size_t width,
                            const ScheduleConfig& config)
{
    EcmSchedule s;
    s.blocks = config.blocks ? *config.blocks : blocks_for(N, config.c, config.c2);
    if (s.blocks == 0) {
        throw InvalidParameter("schedule needs at least one block");
    }
    s.divisions_per_block = width;
    s.stage1_bound = config.b1;
    s.k_bits = scalar_bits(stage1_scalar(config.b1));
    s.seed = seed;
    s.width = width;
    return s;
}

}  // namespace

EcmSchedule make_schedule(const FactoringInstance& inst, const ScheduleConfig& config)
{
    return schedule_common(inst.N, inst.seed, params::bound_width(inst), config);
}

EcmSchedule make_schedule_for(const Integer& n, std::uint64_t seed, const ScheduleConfig& config)
{
    if (n < 2) {
        throw InvalidParameter("make_schedule_for needs n >= 2");
    }
    // The block-count formula needs ln ln n > 0; tiny n borrow N = 16.
    const Integer scale = n < 16 ? Integer(16) : n;
    return schedule_common(scale, seed, bitlen(n), config);
}

std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Integer prng_constant(std::uint64_t seed, std::uint64_t block_index, unsigned param,
                      std::size_t width)
{
    if (param > 2) {
        throw InvalidParameter("prng_constant: param must be 0, 1 or 2");
    }
    const std::size_t words = (width + 63) / 64;
    if (words > 256) {
        throw InvalidParameter("prng_constant: width above 16384 bits");
    }
    Integer v = 0;
    for (std::size_t j = words; j-- > 0;) {
        const std::uint64_t counter = ((block_index * 3 + param) << 8) | j;
        const std::uint64_t word = mix64(mix64(counter) ^ seed);
        v <<= 64;
        Integer w;
        mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
        v += w;
    }
    mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), width);
    return v;
}

EcmCurve curve_from_seed(std::uint64_t seed, std::uint64_t block_index, const Integer& n,
                         std::size_t width)
{
    if (n < 1) {
        throw InvalidParameter("curve_from_seed needs n >= 1");
    }
    const std::size_t w = width == 0 ? bitlen(n) : width;
    const ModField f{n};
    EcmCurve c;
    c.n = n;
    c.a_param = f.reduce(prng_constant(seed, block_index, 0, w));
    c.x0 = f.reduce(prng_constant(seed, block_index, 1, w));
    c.y0 = f.reduce(prng_constant(seed, block_index, 2, w));
    c.b_param = f.reduce(c.y0 * c.y0 - c.x0 * c.x0 * c.x0 - c.a_param * c.x0);
    return c;
}

Stage1Outcome stage1(const EcmCurve& curve, const std::vector<bool>& k_bits)
{
    if (k_bits.empty() || !k_bits.front()) {
        throw InvalidParameter("stage1 needs a non-empty scalar with leading bit 1");
    }
    ModField f{curve.n};
    const auto p = weierstrass::scalar_mul(f, curve.a_param, curve.x0, curve.y0, k_bits);
    return {p.z, smoothsat::gcd(p.z, curve.n), curve.n};
}

namespace {

Integer attempt(const Integer& n, const EcmSchedule& schedule, std::uint64_t block_index,
                EcmCurve* curve_out)
{
    const std::size_t w = std::max(schedule.width, bitlen(n));
    EcmCurve curve = curve_from_seed(schedule.seed, block_index, n, w);
    const Integer g = stage1(curve, schedule.k_bits).g;
    if (curve_out != nullptr) {
        *curve_out = std::move(curve);
    }
    return g;
}

bool acceptable(const Integer& g, std::uint64_t y)
{
    return g > 1 && g <= Integer(static_cast<unsigned long>(y));
}

}  // namespace

std::optional<Integer> find_small_factor(const Integer& n, std::uint64_t y,
                                         const EcmSchedule& schedule, std::uint64_t block_index)
{
    if (n < 2) {
        return std::nullopt;
    }
    const Integer g = attempt(n, schedule, block_index, nullptr);
    if (acceptable(g, y)) {
        return g;
    }
    return std::nullopt;
}

PipelineResult reference_pipeline(const Integer& n, std::uint64_t y, const EcmSchedule& schedule)
{
    if (sgn(n) < 0) {
        throw InvalidParameter("reference_pipeline needs n >= 0");
    }
    PipelineResult res;
    Integer value = n;
    res.trace.reserve(schedule.blocks);
    for (std::uint64_t i = 0; i < schedule.blocks; ++i) {
        BlockTrace bt;
        bt.index = i;
        if (sgn(value) > 0) {
            bt.g = attempt(value, schedule, i, &bt.curve);
            if (acceptable(bt.g, y)) {
                for (std::uint64_t j = 0; j < schedule.divisions_per_block; ++j) {
                    if (mpz_divisible_p(value.get_mpz_t(), bt.g.get_mpz_t()) == 0) {
                        break;
                    }
                    mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), bt.g.get_mpz_t());
                    ++bt.divisions;
                }
            }
        }
        bt.value_after = value;
        res.trace.push_back(std::move(bt));
    }
    res.final_value = value;
    return res;
}

void write_trace(std::ostream& os, const std::vector<BlockTrace>& trace)
{
    for (const auto& b : trace) {
        os << "block " << b.index << ": a=" << to_string(b.curve.a_param)
           << " x0=" << to_string(b.curve.x0) << " y0=" << to_string(b.curve.y0)
           << " g=" << to_string(b.g) << " divs=" << b.divisions
           << " n'=" << to_string(b.value_after) << '\n';
    }
}

double success_probability(std::uint64_t blocks, std::uint64_t omega_needed, double p,
                           ProbabilityMode mode)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidParameter("success probability p must lie in (0, 1)");
    }
    if (omega_needed == 0) {
        return 1.0;
    }
    if (omega_needed > blocks) {
        return 0.0;
    }
    const auto B = static_cast<double>(blocks);
    if (mode == ProbabilityMode::Normal) {
        const double mean = B * p;
        const double var = B * p * (1.0 - p);
        return 0.5 * (1.0 - std::erf((static_cast<double>(omega_needed) - mean) / std::sqrt(2.0 * var)));
    }
    // Sum the tail in log space, largest terms last for accuracy.
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    double total = 0.0;
    for (std::uint64_t x = blocks + 1; x-- > omega_needed;) {
        const auto X = static_cast<double>(x);
        const double log_term =
            std::lgamma(B + 1.0) - std::lgamma(X + 1.0) - std::lgamma(B - X + 1.0) + X * lp + (B - X) * lq;
        total += std::exp(log_term);
    }
    return std::min(1.0, total);
}

double circuit_size_estimate(const FactoringInstance& inst, double beta, const ScheduleConfig& config)
{
    if (!(beta > 0.0)) {
        throw InvalidParameter("circuit_size_estimate needs beta > 0");
    }
    const double ln_n = smoothsat::log(inst.N);
    const double blocks = static_cast<double>(blocks_for(inst.N, config.c, config.c2));
    const double divisions = static_cast<double>(params::bound_width(inst));
    const double ln_y = beta * std::cbrt(ln_n) * std::pow(std::log(ln_n), 2.0 / 3.0);
    const double ln_k = ln_y > 1.0 ? std::sqrt(2.0) * std::sqrt(ln_y * std::log(ln_y)) : 0.0;
    return std::log(blocks) + std::log(divisions) + ln_k + std::log(ln_n) + std::log(ln_n);
}

}  // namespace smoothsat::ecm

#include "smoothsat/families.hpp"

#include "smoothsat/arith.hpp"
#include "smoothsat/errors.hpp"
#include "smoothsat/smooth.hpp"
#include "smoothsat/weierstrass.hpp"

namespace smoothsat::circuit {

namespace {

using namespace smoothsat::arith;

// Residues mod a variable modulus held on wires. Operands are always reduced, which
// is the precondition of mod_reduce and of the single conditional subtraction.
struct CircuitField {
    using Elem = Bits;
    Builder& b;
    Bits n;

    Elem add(const Elem& x, const Elem& y)
    {
        const Bits s = arith::add(b, x, y);
        const auto t = arith::sub(b, s, n);
        return truncate(mux(b, t.borrow, s, t.diff), n.size());
    }
    Elem sub(const Elem& x, const Elem& y)
    {
        const auto d = arith::sub(b, x, y);
        const Bits wrapped = truncate(arith::add(b, d.diff, n), n.size());
        return mux(b, d.borrow, wrapped, d.diff);
    }
    Elem mul(const Elem& x, const Elem& y) { return mod_reduce(b, arith::mul(b, x, y), n); }
    Elem one()
    {
        const Wire n_is_one = equal(b, n, constant(b, 1, n.size()));
        return mux(b, n_is_one, constant(b, 0, n.size()), constant(b, 1, n.size()));
    }
};

std::size_t u_bits(const FactoringInstance& inst) { return bitlen(static_cast<std::uint64_t>(inst.u)); }

}  // namespace

std::size_t a_width(const FactoringInstance& inst) { return 1 + u_bits(inst); }
std::size_t b_width(const FactoringInstance& inst) { return u_bits(inst); }

std::size_t exponent_width(const FactoringInstance& inst)
{
    return bitlen(static_cast<std::uint64_t>(params::bound_width(inst)));
}

std::size_t factor_width(const FactoringInstance& inst)
{
    return bitlen(smooth::primes_upto(inst.y).back());
}

std::size_t factor_count(const FactoringInstance& inst)
{
    return std::max<std::size_t>(1, params::bound_width(inst) - 1);
}

std::pair<Bits, Bits> add_ab_inputs(Builder& b, const FactoringInstance& inst)
{
    Bits a = b.add_input("a", "a", a_width(inst));
    Bits bb = b.add_input("b", "b", b_width(inst));
    return {a, bb};
}

FBlock build_F_block(Builder& b, const FactoringInstance& inst, const Bits& a_bus, const Bits& b_bus)
{
    const std::size_t w = params::bound_width(inst);
    const std::size_t W = w + 2;  // every intermediate fits in w+1 signed bits
    const Bits mag(a_bus.begin(), a_bus.end() - 1);
    const Wire sign = a_bus.back();

    const Bits a_tc = cond_negate(b, zext(b, mag, W), sign);
    const Bits b_tc = zext(b, b_bus, W);
    const Bits neg_b = negate(b, b_tc);

    auto mulw = [&](const Bits& x, const Bits& y) { return mul_trunc(b, x, y, W).low; };
    auto addw = [&](const Bits& x, const Bits& y) { return truncate(add(b, x, y), W); };
    auto cst = [&](const Integer& v) { return constant(b, v, W); };

    const Bits linear = addw(a_tc, mulw(b_tc, cst(inst.m)));

    Bits h = cst(inst.coeffs[inst.d]);
    Bits nb_pow = cst(1);
    for (unsigned k = 1; k <= inst.d; ++k) {
        nb_pow = mulw(nb_pow, neg_b);
        h = addw(mulw(h, a_tc), mulw(cst(inst.coeffs[inst.d - k]), nb_pow));
    }
    const Bits f = mulw(linear, h);
    const Bits abs_f = truncate(cond_negate(b, f, f[W - 1]), w);

    const Bits u_const = constant(b, Integer(static_cast<unsigned long>(inst.u)), mag.size());
    Wire in_box = compare_le(b, mag, u_const);
    in_box = b.and_(in_box, compare_le(b, b_bus, u_const));
    in_box = b.and_(in_box, b.not_(is_zero(b, b_bus)));
    in_box = b.and_(in_box, b.not_(b.and_(sign, is_zero(b, mag))));
    return {abs_f, in_box};
}

FProbe build_F_circuit(const FactoringInstance& inst)
{
    Builder b;
    auto [a, bb] = add_ab_inputs(b, inst);
    const FBlock f = build_F_block(b, inst, a, bb);
    FProbe probe;
    probe.abs_f = f.abs_f;
    probe.circuit = b.finish(f.in_box, params::bound_width(inst));
    return probe;
}

BoolCircuit build_varexp_circuit(const FactoringInstance& inst)
{
    const auto primes = smooth::primes_upto(inst.y);
    const std::size_t w = params::bound_width(inst);
    const std::size_t ew = exponent_width(inst);
    const Integer limit = pow(Integer(2), w);

    Builder b;
    auto [a, bb] = add_ab_inputs(b, inst);
    std::vector<Bits> exps;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        exps.push_back(b.add_input("e" + std::to_string(i + 1), "e", ew));
    }
    const FBlock f = build_F_block(b, inst, a, bb);

    Bits prod = constant(b, 1, w);
    Wire overflow = b.zero();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        Integer power(static_cast<unsigned long>(primes[i]));  // p^(2^j)
        for (std::size_t j = 0; j < ew; ++j) {
            const Wire bit = exps[i][j];
            if (power >= limit) {
                overflow = b.or_(overflow, bit);
            } else {
                const auto t = mul_trunc(b, prod, constant(b, power, bitlen(power)), w);
                prod = mux(b, bit, t.low, prod);
                overflow = b.or_(overflow, b.and_(bit, t.overflow));
            }
            if (power < limit) {
                power *= power;
            }
        }
    }
    Wire out = b.and_(equal(b, prod, f.abs_f), b.not_(overflow));
    out = b.and_(out, f.in_box);
    return b.finish(out, w);
}

BoolCircuit build_varfactor_circuit(const FactoringInstance& inst)
{
    const std::size_t w = params::bound_width(inst);
    const std::size_t fw = factor_width(inst);
    const std::size_t count = factor_count(inst);
    const Integer y(static_cast<unsigned long>(inst.y));
    const bool needs_range = pow(Integer(2), fw) - 1 > y;

    Builder b;
    auto [a, bb] = add_ab_inputs(b, inst);
    std::vector<Bits> qs;
    for (std::size_t i = 0; i < count; ++i) {
        qs.push_back(b.add_input("q" + std::to_string(i + 1), "q", fw));
    }
    const FBlock f = build_F_block(b, inst, a, bb);

    Bits prod = constant(b, 1, w);
    Wire overflow = b.zero();
    Wire factors_ok = b.one();
    const Bits y_const = constant(b, y, fw);
    const Bits one_const = constant(b, 1, fw);
    for (const auto& q : qs) {
        const Bits padded = mux(b, is_zero(b, q), one_const, q);
        if (needs_range) {
            factors_ok = b.and_(factors_ok, compare_le(b, q, y_const));
        }
        const auto t = mul_trunc(b, prod, padded, w);
        prod = t.low;
        overflow = b.or_(overflow, t.overflow);
    }
    Wire out = b.and_(equal(b, prod, f.abs_f), b.not_(overflow));
    out = b.and_(out, factors_ok);
    out = b.and_(out, f.in_box);
    return b.finish(out, w);
}

BoolCircuit build_ecm_circuit(const FactoringInstance& inst, const ecm::EcmSchedule& schedule)
{
    const std::size_t w = params::bound_width(inst);
    if (schedule.width != w || schedule.divisions_per_block != w) {
        throw InvalidParameter("ECM schedule widths do not match bitlen(bound_F) = " +
                               std::to_string(w));
    }
    if (schedule.k_bits.empty() || !schedule.k_bits.front()) {
        throw InvalidParameter("ECM schedule has an invalid stage-1 scalar");
    }
    const Integer y(static_cast<unsigned long>(inst.y));
    const std::size_t yw = bitlen(y);

    Builder b;
    auto [a, bb] = add_ab_inputs(b, inst);
    const FBlock f = build_F_block(b, inst, a, bb);

    Bits n = f.abs_f;
    const Bits one_w = constant(b, 1, w);
    const Bits y_w = constant(b, y, w);
    for (std::uint64_t blk = 0; blk < schedule.blocks; ++blk) {
        auto reduced = [&](unsigned param) {
            const Integer raw = ecm::prng_constant(schedule.seed, blk, param, w);
            return divmod(b, constant(b, raw, w), n).remainder;
        };
        const Bits curve_a = reduced(0);
        const Bits x0 = reduced(1);
        const Bits y0 = reduced(2);

        CircuitField field{b, n};
        const auto kp = weierstrass::scalar_mul(field, curve_a, x0, y0, schedule.k_bits);
        const Bits g = binary_gcd(b, kp.z, n);
        const Wire ok = b.and_(b.not_(compare_le(b, g, one_w)), compare_le(b, g, y_w));
        const Bits g_small = truncate(g, yw);  // exact whenever ok holds

        for (std::uint64_t j = 0; j < schedule.divisions_per_block; ++j) {
            const auto dm = divmod(b, n, g_small);
            const Wire divide = b.and_(ok, is_zero(b, dm.remainder));
            n = mux(b, divide, dm.quotient, n);
        }
    }
    const Wire out = b.and_(equal(b, n, one_w), f.in_box);
    return b.finish(out, w);
}

const char* family_name(Family f)
{
    switch (f) {
    case Family::VarExp: return "varexp";
    case Family::VarFactor: return "varfactor";
    case Family::Ecm: return "ecm";
    }
    return "?";
}

Family parse_family(const std::string& s)
{
    if (s == "varexp") {
        return Family::VarExp;
    }
    if (s == "varfactor") {
        return Family::VarFactor;
    }
    if (s == "ecm") {
        return Family::Ecm;
    }
    throw InvalidParameter("unknown circuit family '" + s + "' (varexp|varfactor|ecm)");
}

InputPoint ab_point(const BoolCircuit& c, std::int64_t a, std::int64_t b)
{
    InputPoint p;
    p["a"] = encode_sign_magnitude(a, c.bus("a").width());
    p["b"] = encode_unsigned(Integer(static_cast<long>(b)), c.bus("b").width());
    return p;
}

InputPoint varexp_point(const BoolCircuit& c, std::int64_t a, std::int64_t b,
                        const std::vector<std::uint32_t>& exponents)
{
    InputPoint p = ab_point(c, a, b);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        const std::string name = "e" + std::to_string(i + 1);
        p[name] = encode_unsigned(Integer(static_cast<unsigned long>(exponents[i])), c.bus(name).width());
    }
    return p;
}

InputPoint varfactor_point(const BoolCircuit& c, std::int64_t a, std::int64_t b,
                           const std::vector<std::uint64_t>& factors)
{
    InputPoint p = ab_point(c, a, b);
    for (const auto& bus : c.buses) {
        if (bus.role != "q") {
            continue;
        }
        const std::size_t idx = std::stoul(bus.name.substr(1)) - 1;
        const std::uint64_t v = idx < factors.size() ? factors[idx] : 0;
        p[bus.name] = encode_unsigned(Integer(static_cast<unsigned long>(v)), bus.width());
    }
    std::size_t q_buses = 0;
    for (const auto& bus : c.buses) {
        q_buses += bus.role == "q" ? 1 : 0;
    }
    if (factors.size() > q_buses) {
        throw InvalidParameter("more factors than q buses");
    }
    return p;
}

std::vector<std::uint64_t> prime_factor_list(const std::vector<std::uint64_t>& primes,
                                             const std::vector<std::uint32_t>& exponents)
{
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        for (std::uint32_t k = 0; k < exponents[i]; ++k) {
            out.push_back(primes[i]);
        }
    }
    return out;
}

}  // namespace smoothsat::circuit

#include "smoothsat/arith.hpp"

#include <algorithm>

#include "smoothsat/errors.hpp"

namespace smoothsat::arith {

Bits constant(Builder& b, const Integer& v, std::size_t width)
{
    if (sgn(v) < 0) {
        throw InvalidParameter("arith::constant takes non-negative values");
    }
    Bits out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out[i] = b.constant(test_bit(v, i));
    }
    return out;
}

Bits zext(Builder& b, const Bits& x, std::size_t width)
{
    Bits out = x;
    out.resize(std::max(width, x.size()), b.zero());
    out.resize(width);
    return out;
}

Bits truncate(const Bits& x, std::size_t width)
{
    Bits out = x;
    out.resize(std::min(width, x.size()));
    return out;
}

Wire mux(Builder& b, Wire s, Wire x, Wire y)
{
    if (x == y) {
        return x;
    }
    // y ^ (s & (x ^ y))
    return b.xor_(y, b.and_(s, b.xor_(x, y)));
}

Bits mux(Builder& b, Wire s, const Bits& x, const Bits& y)
{
    const std::size_t w = std::max(x.size(), y.size());
    const Bits xe = zext(b, x, w);
    const Bits ye = zext(b, y, w);
    Bits out(w);
    for (std::size_t i = 0; i < w; ++i) {
        out[i] = mux(b, s, xe[i], ye[i]);
    }
    return out;
}

Wire or_reduce(Builder& b, const Bits& x)
{
    Wire acc = b.zero();
    for (auto w : x) {
        acc = b.or_(acc, w);
    }
    return acc;
}

Wire and_reduce(Builder& b, const Bits& x)
{
    Wire acc = b.one();
    for (auto w : x) {
        acc = b.and_(acc, w);
    }
    return acc;
}

Wire is_zero(Builder& b, const Bits& x) { return b.not_(or_reduce(b, x)); }

namespace {

struct FullAdd {
    Wire sum;
    Wire carry;
};

FullAdd full_add(Builder& b, Wire x, Wire y, Wire c)
{
    const Wire t = b.xor_(x, y);
    return {b.xor_(t, c), b.or_(b.and_(x, y), b.and_(c, t))};
}

// Ripple-carry x + y + cin over width w; returns w sum bits and the carry out.
std::pair<Bits, Wire> ripple(Builder& b, const Bits& x, const Bits& y, Wire cin, std::size_t w)
{
    const Bits xe = zext(b, x, w);
    const Bits ye = zext(b, y, w);
    Bits sum(w);
    Wire c = cin;
    for (std::size_t i = 0; i < w; ++i) {
        const auto fa = full_add(b, xe[i], ye[i], c);
        sum[i] = fa.sum;
        c = fa.carry;
    }
    return {sum, c};
}

Bits invert(Builder& b, const Bits& x)
{
    Bits out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = b.not_(x[i]);
    }
    return out;
}

}  // namespace

Bits add(Builder& b, const Bits& x, const Bits& y)
{
    const std::size_t w = std::max(x.size(), y.size());
    auto [sum, carry] = ripple(b, x, y, b.zero(), w);
    sum.push_back(carry);
    return sum;
}

SubResult sub(Builder& b, const Bits& x, const Bits& y)
{
    const std::size_t w = std::max(x.size(), y.size());
    auto [diff, carry] = ripple(b, x, invert(b, zext(b, y, w)), b.one(), w);
    return {diff, b.not_(carry)};
}

Bits negate(Builder& b, const Bits& x)
{
    const Bits zero(x.size(), b.zero());
    return sub(b, zero, x).diff;
}

Bits cond_negate(Builder& b, const Bits& x, Wire s)
{
    Bits flipped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        flipped[i] = b.xor_(x[i], s);
    }
    return ripple(b, flipped, Bits{}, s, x.size()).first;
}

Bits mul(Builder& b, const Bits& x, const Bits& y)
{
    const std::size_t w = x.size() + y.size();
    Bits acc(w, b.zero());
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (b.is_const(y[j]) && !b.const_value(y[j])) {
            continue;
        }
        // acc[j .. j + wx] += x & y_j
        Bits row(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            row[i] = b.and_(x[i], y[j]);
        }
        const std::size_t span = std::min(w - j, x.size() + 1);
        Bits window(acc.begin() + static_cast<std::ptrdiff_t>(j),
                    acc.begin() + static_cast<std::ptrdiff_t>(j + span));
        auto [sum, carry] = ripple(b, window, row, b.zero(), span);
        std::copy(sum.begin(), sum.end(), acc.begin() + static_cast<std::ptrdiff_t>(j));
        // The running sum never exceeds x * 2^(j+1), so the window's carry is zero.
        (void)carry;
    }
    return acc;
}

TruncatedProduct mul_trunc(Builder& b, const Bits& x, const Bits& y, std::size_t width)
{
    if (width == 0) {
        throw InvalidParameter("mul_trunc needs width >= 1");
    }
    const Bits full = mul(b, x, y);
    TruncatedProduct r;
    r.low = zext(b, truncate(full, width), width);
    Bits high;
    for (std::size_t i = width; i < full.size(); ++i) {
        high.push_back(full[i]);
    }
    r.overflow = or_reduce(b, high);
    return r;
}

DivMod divmod(Builder& b, const Bits& n, const Bits& d)
{
    if (n.empty() || d.empty()) {
        throw InvalidParameter("divmod needs non-zero widths");
    }
    const std::size_t wd = d.size();
    const Bits d_ext = zext(b, d, wd + 1);
    Bits r(wd, b.zero());
    Bits q(n.size());
    for (std::size_t i = n.size(); i-- > 0;) {
        Bits shifted;
        shifted.reserve(wd + 1);
        shifted.push_back(n[i]);
        shifted.insert(shifted.end(), r.begin(), r.end());
        const auto s = sub(b, shifted, d_ext);
        q[i] = b.not_(s.borrow);
        r = truncate(mux(b, s.borrow, shifted, s.diff), wd);
    }
    return {q, r};
}

Bits mod_reduce(Builder& b, const Bits& x, const Bits& n)
{
    const std::size_t w = n.size();
    if (x.size() != 2 * w || w == 0) {
        throw InvalidParameter("mod_reduce needs a 2w-bit dividend and a w-bit modulus");
    }
    const Bits n_ext = zext(b, n, w + 1);
    Bits r(x.begin() + static_cast<std::ptrdiff_t>(w), x.end());
    for (std::size_t i = w; i-- > 0;) {
        Bits shifted;
        shifted.reserve(w + 1);
        shifted.push_back(x[i]);
        shifted.insert(shifted.end(), r.begin(), r.end());
        const auto s = sub(b, shifted, n_ext);
        r = truncate(mux(b, s.borrow, shifted, s.diff), w);
    }
    return r;
}

Wire less_than(Builder& b, const Bits& x, const Bits& y) { return sub(b, x, y).borrow; }

Wire compare_le(Builder& b, const Bits& x, const Bits& y) { return b.not_(less_than(b, y, x)); }

Wire equal(Builder& b, const Bits& x, const Bits& y)
{
    const std::size_t w = std::max(x.size(), y.size());
    const Bits xe = zext(b, x, w);
    const Bits ye = zext(b, y, w);
    Wire diff = b.zero();
    for (std::size_t i = 0; i < w; ++i) {
        diff = b.or_(diff, b.xor_(xe[i], ye[i]));
    }
    return b.not_(diff);
}

Bits binary_gcd(Builder& b, const Bits& x, const Bits& y)
{
    if (x.size() != y.size() || x.empty()) {
        throw InvalidParameter("binary_gcd needs equal non-zero widths");
    }
    const std::size_t w = x.size();
    Bits u = x;
    Bits v = y;
    Bits t = constant(b, 1, w);  // common power of two, always <= 2^(w-1)

    auto shr = [&](const Bits& z) {
        Bits out(z.begin() + 1, z.end());
        out.push_back(b.zero());
        return out;
    };
    auto shl = [&](const Bits& z) {
        Bits out;
        out.push_back(b.zero());
        out.insert(out.end(), z.begin(), z.end() - 1);
        return out;
    };

    for (std::size_t iter = 0; iter < 2 * w; ++iter) {
        const Wire active = b.and_(b.not_(is_zero(b, u)), b.not_(is_zero(b, v)));
        const Wire u_even = b.not_(u[0]);
        const Wire v_even = b.not_(v[0]);
        const Wire both_even = b.and_(u_even, v_even);
        const Wire both_odd = b.and_(u[0], v[0]);

        const auto d = sub(b, u, v);  // u - v
        const Bits half_d = shr(d.diff);
        const Bits half_neg_d = shr(negate(b, d.diff));

        // both odd: the larger operand becomes |u - v| / 2
        const Wire u_ge_v = b.not_(d.borrow);
        const Bits u_odd_case = mux(b, u_ge_v, half_d, u);
        const Bits v_odd_case = mux(b, u_ge_v, v, half_neg_d);

        // u even: halve u (and v too when both even); otherwise v even: halve v
        const Bits u_even_case = shr(u);
        const Bits v_even_case = mux(b, both_even, shr(v), mux(b, v_even, shr(v), v));

        const Bits u_step = mux(b, both_odd, u_odd_case, mux(b, u_even, u_even_case, u));
        const Bits v_step = mux(b, both_odd, v_odd_case, mux(b, u_even, v_even_case,
                                                              mux(b, v_even, shr(v), v)));
        const Bits t_step = mux(b, both_even, shl(t), t);

        u = mux(b, active, u_step, u);
        v = mux(b, active, v_step, v);
        t = mux(b, active, t_step, t);
    }
    Bits rest(w);
    for (std::size_t i = 0; i < w; ++i) {
        rest[i] = b.or_(u[i], v[i]);
    }
    return mul_trunc(b, rest, t, w).low;
}

}  // namespace smoothsat::arith

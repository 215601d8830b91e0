#pragma once

#include <cstddef>

#include "smoothsat/circuit.hpp"
#include "smoothsat/integer.hpp"

/// Word-level arithmetic over bit vectors (LSB first). Unless stated otherwise the
/// operands are unsigned and widths may differ.
namespace smoothsat::arith {

using circuit::Bits;
using circuit::Builder;
using circuit::Wire;

Bits constant(Builder& b, const Integer& v, std::size_t width);
Bits zext(Builder& b, const Bits& x, std::size_t width);
Bits truncate(const Bits& x, std::size_t width);

/// s ? x : y, bitwise; widths are zero-extended to the larger one.
Wire mux(Builder& b, Wire s, Wire x, Wire y);
Bits mux(Builder& b, Wire s, const Bits& x, const Bits& y);

Wire or_reduce(Builder& b, const Bits& x);
Wire and_reduce(Builder& b, const Bits& x);
Wire is_zero(Builder& b, const Bits& x);

/// x + y, width max(wx, wy) + 1.
Bits add(Builder& b, const Bits& x, const Bits& y);

struct SubResult {
    Bits diff;    ///< (x - y) mod 2^max(wx, wy)
    Wire borrow;  ///< x < y
};
SubResult sub(Builder& b, const Bits& x, const Bits& y);

/// Two's complement negation modulo 2^width(x).
Bits negate(Builder& b, const Bits& x);
/// s ? -x : x modulo 2^width(x).
Bits cond_negate(Builder& b, const Bits& x, Wire s);

/// Full schoolbook product, width wx + wy.
Bits mul(Builder& b, const Bits& x, const Bits& y);

struct TruncatedProduct {
    Bits low;       ///< product mod 2^width
    Wire overflow;  ///< product >= 2^width
};
TruncatedProduct mul_trunc(Builder& b, const Bits& x, const Bits& y, std::size_t width);

struct DivMod {
    Bits quotient;   ///< width wn
    Bits remainder;  ///< width wd
};
/// Restoring division n = q d + r, 0 <= r < d for d > 0. For d = 0 the result is
/// well defined but meaningless.
DivMod divmod(Builder& b, const Bits& n, const Bits& d);

/// x mod n for x of width 2w and n of width w, assuming floor(x / 2^w) < n
/// (true whenever x is a product of two residues mod n). w restoring steps.
Bits mod_reduce(Builder& b, const Bits& x, const Bits& n);

Wire less_than(Builder& b, const Bits& x, const Bits& y);
Wire compare_le(Builder& b, const Bits& x, const Bits& y);
Wire equal(Builder& b, const Bits& x, const Bits& y);

/// gcd(x, y) for equal-width operands via 2w fixed binary-GCD iterations;
/// gcd(0, 0) = 0, gcd(x, 0) = x.
Bits binary_gcd(Builder& b, const Bits& x, const Bits& y);

}  // namespace smoothsat::arith

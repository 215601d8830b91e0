#pragma once

#include <vector>

/// Projective short-Weierstrass arithmetic, y^2 = x^3 + a x + b, written once over an
/// abstract residue field so that the word-level reference and the gate-level circuit
/// run the identical straight-line program.
///
/// Field must provide: Elem, add(x, y), sub(x, y), mul(x, y), one().
namespace smoothsat::weierstrass {

template <class Field>
struct Point {
    typename Field::Elem x;
    typename Field::Elem y;
    typename Field::Elem z;
};

/// 2P (12 multiplications, no inversion).
template <class Field>
Point<Field> dbl(Field& f, const typename Field::Elem& a, const Point<Field>& p)
{
    const auto xx = f.mul(p.x, p.x);
    const auto zz = f.mul(p.z, p.z);
    const auto w = f.add(f.mul(a, zz), f.add(f.add(xx, xx), xx));
    const auto yz = f.mul(p.y, p.z);
    const auto s = f.add(yz, yz);
    const auto ss = f.mul(s, s);
    const auto sss = f.mul(s, ss);
    const auto r = f.mul(p.y, s);
    const auto rr = f.mul(r, r);
    const auto xr = f.add(p.x, r);
    const auto bb = f.sub(f.sub(f.mul(xr, xr), xx), rr);
    const auto h = f.sub(f.mul(w, w), f.add(bb, bb));
    return {f.mul(h, s), f.sub(f.mul(w, f.sub(bb, h)), f.add(rr, rr)), sss};
}

/// P + (x2 : y2 : 1) (11 multiplications, no inversion). Degenerates to (0:0:0)
/// when the affine images coincide; the ECM factor test tolerates that.
template <class Field>
Point<Field> madd(Field& f, const Point<Field>& p, const typename Field::Elem& x2,
                  const typename Field::Elem& y2)
{
    const auto u = f.sub(f.mul(y2, p.z), p.y);
    const auto uu = f.mul(u, u);
    const auto v = f.sub(f.mul(x2, p.z), p.x);
    const auto vv = f.mul(v, v);
    const auto vvv = f.mul(v, vv);
    const auto r = f.mul(vv, p.x);
    const auto aa = f.sub(f.sub(f.mul(uu, p.z), vvv), f.add(r, r));
    return {f.mul(v, aa), f.sub(f.mul(u, f.sub(r, aa)), f.mul(vvv, p.y)), f.mul(vvv, p.z)};
}

/// k P by left-to-right double-and-add over the fixed bits of k (MSB first, leading 1).
template <class Field>
Point<Field> scalar_mul(Field& f, const typename Field::Elem& a, const typename Field::Elem& x0,
                        const typename Field::Elem& y0, const std::vector<bool>& k_bits)
{
    Point<Field> r{x0, y0, f.one()};
    for (std::size_t i = 1; i < k_bits.size(); ++i) {
        r = dbl(f, a, r);
        if (k_bits[i]) {
            r = madd(f, r, x0, y0);
        }
    }
    return r;
}

}  // namespace smoothsat::weierstrass

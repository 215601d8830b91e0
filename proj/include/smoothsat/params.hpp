#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smoothsat/analysis.hpp"
#include "smoothsat/integer.hpp"

namespace smoothsat {

/// N together with its base-m polynomial and search parameters.
///
/// Immutable once built; construct through derive_instance() or make_instance(),
/// which establish N = sum c_i m^i with 0 <= c_i < m.
struct FactoringInstance {
    Integer N;
    unsigned d = 0;
    Integer m;
    std::vector<Integer> coeffs;  ///< c_0 .. c_d
    std::uint64_t y = 0;          ///< smoothness bound
    std::uint64_t u = 0;          ///< search box |a| <= u, 0 < b <= u
    std::uint64_t seed = 0;       ///< PRNG seed for ECM curve constants

    bool operator==(const FactoringInstance&) const = default;
};

/// U = {(a,b) : |a| <= u, 0 < b <= u}; coprimality is left to post-processing.
struct SearchBox {
    std::uint64_t u = 1;

    bool contains(std::int64_t a, std::int64_t b) const
    {
        const auto ua = static_cast<std::int64_t>(u);
        return a >= -ua && a <= ua && b > 0 && b <= ua;
    }
    std::uint64_t size() const { return (2 * u + 1) * u; }
};

namespace params {

/// L_x[a, b] = exp(b (ln x)^a (ln ln x)^(1-a)), natural logs; x >= 16.
double l_value(const Integer& x, double a, double b);

/// Exact base-m digits of N, c_0 first.
std::vector<Integer> base_m_digits(const Integer& N, const Integer& m);

/// Builds an instance from explicit parameters; m = floor(N^(1/d)).
/// Throws InvalidParameter if N is even or < 15, d < 1, N <= 2^(d^2), y < 2 or u < 1.
FactoringInstance make_instance(const Integer& N, unsigned d, std::uint64_t y, std::uint64_t u,
                                std::uint64_t seed = 0);

/// Degree from delta with o(1) = 0, rounded to nearest, clamped to >= 2 and lowered
/// until N > 2^(d^2).
unsigned degree_for(const Integer& N, double delta);

/// Parameters from a speedup profile with all o(1) terms set to 0.
FactoringInstance derive_instance(const Integer& N, const analysis::SpeedupProfile& profile,
                                  std::uint64_t seed = 0);

/// g(a,b) = sum c_i a^i (-b)^(d-i).
Integer eval_g(const FactoringInstance& inst, std::int64_t a, std::int64_t b);

/// F(a,b) = (a + b m) g(a,b), signed.
Integer eval_F(const FactoringInstance& inst, std::int64_t a, std::int64_t b);

/// 2 (d+1) ceil(N^(2/d)) u^(d+1), an upper bound on |F| over the search box.
Integer bound_F(const FactoringInstance& inst);

/// bitlen(bound_F): the truncation width of every circuit built for the instance.
std::size_t bound_width(const FactoringInstance& inst);

/// Plain key/value manifest (`key value` per line, decimal).
void write_manifest(std::ostream& os, const FactoringInstance& inst);
std::string manifest_string(const FactoringInstance& inst);
FactoringInstance read_manifest(std::istream& is);
FactoringInstance load_manifest(const std::string& path);
void save_manifest(const std::string& path, const FactoringInstance& inst);

}  // namespace params
}  // namespace smoothsat

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smoothsat/integer.hpp"
#include "smoothsat/params.hpp"

namespace smoothsat {

/// A pair (a,b) whose |F(a,b)| factors completely over the primes <= y.
struct SmoothnessWitness {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::vector<std::uint32_t> exponents;  ///< indexed like primes_upto(y)

    bool operator==(const SmoothnessWitness&) const = default;
};

/// Exponent vector reduced modulo 2.
struct ExponentVectorMod2 {
    std::vector<std::uint8_t> bits;

    bool operator==(const ExponentVectorMod2&) const = default;
};

namespace smooth {

/// Primes <= y by sieve of Eratosthenes; y >= 2.
std::vector<std::uint64_t> primes_upto(std::uint64_t y);

/// Exponents of n over primes_upto(y), or nullopt if n has a prime factor > y.
std::optional<std::vector<std::uint32_t>> factor_exponents(const Integer& n, std::uint64_t y);

/// Same, reusing a precomputed prime list.
std::optional<std::vector<std::uint32_t>> factor_exponents(const Integer& n,
                                                           const std::vector<std::uint64_t>& primes);

bool is_smooth(const Integer& n, std::uint64_t y);

/// Number of prime factors with multiplicity; n >= 2.
std::uint64_t omega(const Integer& n);

/// Scans U with b ascending then a ascending, skipping gcd(a,b) != 1 and F(a,b) = 0.
std::vector<SmoothnessWitness> find_T(const FactoringInstance& inst, std::size_t limit);

ExponentVectorMod2 exponent_vector_mod2(const SmoothnessWitness& w);

/// Re-checks |F(a,b)| = prod p_i^e_i, gcd(a,b) = 1 and (a,b) in U.
bool verify_witness(const FactoringInstance& inst, const SmoothnessWitness& w);

/// Witness list: one `a b : e_1 ... e_k` line per witness.
void write_witnesses(std::ostream& os, const std::vector<SmoothnessWitness>& ws);
std::vector<SmoothnessWitness> read_witnesses(std::istream& is);

}  // namespace smooth
}  // namespace smoothsat

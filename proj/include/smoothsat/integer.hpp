#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace smoothsat {

using Integer = mpz_class;

/// Number of bits in |x|; bitlen(0) == 0.
inline std::size_t bitlen(const Integer& x)
{
    if (sgn(x) == 0) {
        return 0;
    }
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline std::size_t bitlen(std::uint64_t x)
{
    std::size_t n = 0;
    while (x != 0) {
        ++n;
        x >>= 1;
    }
    return n;
}

/// floor(x^(1/k)) for x >= 0.
inline Integer root_floor(const Integer& x, unsigned long k)
{
    Integer r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

/// ceil(x^(1/k)) for x >= 0.
inline Integer root_ceil(const Integer& x, unsigned long k)
{
    Integer r;
    const int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (exact == 0) {
        r += 1;
    }
    return r;
}

inline Integer pow(const Integer& base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Integer gcd(const Integer& x, const Integer& y)
{
    Integer r;
    mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

inline bool test_bit(const Integer& x, std::size_t i)
{
    return mpz_tstbit(x.get_mpz_t(), i) != 0;
}

/// Parses a decimal integer; throws InvalidParameter on junk.
Integer parse_integer(std::string_view text);

inline std::string to_string(const Integer& x) { return x.get_str(10); }

/// Natural logarithm of a positive big integer, accurate to double precision.
double log(const Integer& x);

}  // namespace smoothsat

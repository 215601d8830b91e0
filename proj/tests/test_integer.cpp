#include <cmath>

#include "doctest.h"
#include "smoothsat/errors.hpp"
#include "smoothsat/integer.hpp"

using namespace smoothsat;

TEST_CASE("bitlen counts significant bits")
{
    CHECK(bitlen(Integer(0)) == 0);
    CHECK(bitlen(Integer(1)) == 1);
    CHECK(bitlen(Integer(14742)) == 14);
    CHECK(bitlen(Integer(-8)) == 4);
    CHECK(bitlen(std::uint64_t{0}) == 0);
    CHECK(bitlen(std::uint64_t{255}) == 8);
    CHECK(bitlen(~std::uint64_t{0}) == 64);
}

TEST_CASE("integer roots floor and ceil")
{
    CHECK(root_floor(Integer(91), 2) == 9);
    CHECK(root_ceil(Integer(91), 2) == 10);
    CHECK(root_floor(Integer(81), 2) == 9);
    CHECK(root_ceil(Integer(81), 2) == 9);
    CHECK(root_floor(Integer(1000000), 3) == 100);
    const Integer big = pow(Integer(2), 200) + 1;
    CHECK(root_floor(big, 2) == pow(Integer(2), 100));
    CHECK(root_ceil(big, 2) == pow(Integer(2), 100) + 1);
}

TEST_CASE("parse_integer accepts decimal and rejects junk")
{
    CHECK(parse_integer("91") == 91);
    CHECK(parse_integer("-17") == -17);
    CHECK(parse_integer("123456789012345678901234567890") == Integer("123456789012345678901234567890"));
    CHECK_THROWS_AS(parse_integer(""), InvalidParameter);
    CHECK_THROWS_AS(parse_integer("12a"), InvalidParameter);
    CHECK_THROWS_AS(parse_integer("0x10"), InvalidParameter);
}

TEST_CASE("log of big integers")
{
    CHECK(smoothsat::log(Integer(1)) == doctest::Approx(0.0));
    CHECK(smoothsat::log(Integer(1000000)) == doctest::Approx(std::log(1e6)).epsilon(1e-15));
    const Integer big = pow(Integer(10), 300) * pow(Integer(10), 200);
    CHECK(smoothsat::log(big) == doctest::Approx(500 * std::log(10.0)).epsilon(1e-14));
}

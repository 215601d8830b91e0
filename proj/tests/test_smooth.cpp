#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "smoothsat/errors.hpp"
#include "smoothsat/smooth.hpp"
#include "test_support.hpp"

using namespace smoothsat;

TEST_CASE("primes_upto small cases")
{
    CHECK(smooth::primes_upto(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(smooth::primes_upto(2) == std::vector<std::uint64_t>{2});
    CHECK_THROWS_AS(smooth::primes_upto(1), InvalidParameter);
}

TEST_CASE("pi(10^6) against an independent count")
{
    const auto primes = smooth::primes_upto(1000000);
    CHECK(primes.size() == 78498);
    // trial-division spot checks on the sieve output
    for (std::size_t i = 0; i < primes.size(); i += 997) CHECK(testsupport::largest_prime_factor(primes[i]) == primes[i]);
    CHECK(primes.back() == 999983);
}

TEST_CASE("factor_exponents")
{
    CHECK(smooth::factor_exponents(Integer(360), 5) == std::vector<std::uint32_t>{3, 2, 1});
    CHECK(smooth::factor_exponents(Integer(1), 7) == std::vector<std::uint32_t>{0, 0, 0, 0});
    CHECK_FALSE(smooth::factor_exponents(Integer(14), 5).has_value());
    CHECK(smooth::is_smooth(Integer(10), 5));
    CHECK_FALSE(smooth::is_smooth(Integer(22), 10));

    std::mt19937_64 rng(11);
    const auto primes = smooth::primes_upto(30);
    for (int i = 0; i < 200; ++i) {
        Integer n = 1;
        std::vector<std::uint32_t> want(primes.size(), 0);
        for (std::size_t k = 0; k < primes.size(); ++k) {
            want[k] = static_cast<std::uint32_t>(rng() % 4);
            n *= pow(Integer(primes[k]), want[k]);
        }
        CHECK(smooth::factor_exponents(n, 30) == want);
        CHECK_FALSE(smooth::factor_exponents(n * 31, 30).has_value());
    }
}

TEST_CASE("omega")
{
    CHECK(smooth::omega(Integer(8)) == 3);
    CHECK(smooth::omega(Integer(12)) == 3);
    CHECK(smooth::omega(Integer(97)) == 1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t n = 2 + rng() % 10000000;
        CHECK(smooth::omega(Integer(n)) <= bitlen(n) - 1);
    }
}

TEST_CASE("find_T on the N = 91 toy")
{
    const auto inst = params::make_instance(Integer(91), 2, 10, 3);
    const auto T = smooth::find_T(inst, 1000);
    bool has11 = false;
    for (const auto& w : T) {
        CHECK(smooth::verify_witness(inst, w));
        if (w.a == 1 && w.b == 1) {
            has11 = true;
            CHECK(w.exponents == std::vector<std::uint32_t>{1, 0, 1, 0});
        }
    }
    CHECK(has11);
    CHECK(smooth::find_T(inst, 0).empty());
    CHECK(smooth::find_T(inst, 1000) == T);
    const auto first2 = smooth::find_T(inst, 2);
    REQUIRE(first2.size() == 2);
    CHECK(first2[0] == T[0]);
    CHECK(first2[1] == T[1]);
    for (std::size_t i = 1; i < T.size(); ++i)
        CHECK(std::make_pair(T[i - 1].b, T[i - 1].a) < std::make_pair(T[i].b, T[i].a));
}

TEST_CASE("find_T matches an independent one-pass filter")
{
    for (std::uint64_t n : {1001ULL, 4087ULL, 65539ULL, 999999ULL}) {
        for (unsigned d : {2u, 3u}) {
            if (Integer(n) <= pow(Integer(2), d * d)) continue;
            const std::uint64_t y = 13, u = 7;
            const auto inst = params::make_instance(Integer(n), d, y, u);
            std::set<std::pair<long, long>> expect;
            for (long b = 1; b <= static_cast<long>(u); ++b)
                for (long a = -static_cast<long>(u); a <= static_cast<long>(u); ++a) {
                    if (std::gcd(a, b) != 1) continue;
                    const mpz_class f = abs(testsupport::direct_F(inst.coeffs, inst.m, a, b));
                    if (f != 0 && f.fits_ulong_p() && testsupport::smooth_u64(f.get_ui(), y)) expect.insert({a, b});
                }
            std::set<std::pair<long, long>> got;
            for (const auto& w : smooth::find_T(inst, 100000)) got.insert({w.a, w.b});
            CHECK(got == expect);
        }
    }
}

TEST_CASE("exponent vectors mod 2")
{
    SmoothnessWitness w{1, 1, {3, 2, 1}};
    CHECK(smooth::exponent_vector_mod2(w).bits == std::vector<std::uint8_t>{1, 0, 1});
    w.exponents = {0, 0, 0};
    CHECK(smooth::exponent_vector_mod2(w).bits == std::vector<std::uint8_t>{0, 0, 0});

    std::mt19937_64 rng(9);
    const auto primes = smooth::primes_upto(20);
    for (int i = 0; i < 100; ++i) {
        Integer n = 1;
        for (int k = 0; k < 6; ++k) n *= primes[rng() % primes.size()];
        const auto e = *smooth::factor_exponents(n, 20);
        const auto bits = smooth::exponent_vector_mod2({0, 1, e}).bits;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            int parity = 0;
            for (Integer r = n; r % primes[k] == 0; r /= primes[k]) parity ^= 1;
            CHECK(bits[k] == parity);
        }
    }
}

TEST_CASE("verify_witness rejects bad witnesses")
{
    const auto inst = params::make_instance(Integer(91), 2, 10, 3);
    CHECK(smooth::verify_witness(inst, {1, 1, {1, 0, 1, 0}}));
    CHECK_FALSE(smooth::verify_witness(inst, {1, 1, {1, 0, 0, 0}}));
    CHECK_FALSE(smooth::verify_witness(inst, {2, 2, {3, 0, 1, 0}}));  // gcd 2
    CHECK_FALSE(smooth::verify_witness(inst, {1, 4, {0, 0, 0, 0}}));  // outside U
}

TEST_CASE("witness file round trip")
{
    const std::vector<SmoothnessWitness> ws{{1, 1, {1, 0, 1, 0}}, {-3, 2, {0, 4, 0, 1}}};
    std::stringstream ss;
    smooth::write_witnesses(ss, ws);
    CHECK(ss.str() == "1 1 : 1 0 1 0\n-3 2 : 0 4 0 1\n");
    CHECK(smooth::read_witnesses(ss) == ws);
    std::istringstream bad("1 1 1 0\n");
    CHECK_THROWS(smooth::read_witnesses(bad));
}

#include <random>
#include <sstream>

#include "doctest.h"
#include "smoothsat/arith.hpp"
#include "smoothsat/circuit.hpp"
#include "smoothsat/errors.hpp"

using namespace smoothsat;
using namespace smoothsat::circuit;

namespace {

/// Random circuit over `n_in` input bits with `n_gates` logic gates.
BoolCircuit random_circuit(std::mt19937_64& rng, std::size_t n_in, std::size_t n_gates)
{
    Builder b;
    const auto x = b.add_input("x", "x", n_in);
    std::vector<Wire> pool(x.begin(), x.end());
    for (std::size_t i = 0; i < n_gates; ++i) {
        const Wire p = pool[rng() % pool.size()];
        const Wire q = pool[rng() % pool.size()];
        switch (rng() % 4) {
        case 0: pool.push_back(b.and_(p, q)); break;
        case 1: pool.push_back(b.or_(p, q)); break;
        case 2: pool.push_back(b.xor_(p, q)); break;
        default: pool.push_back(b.not_(p)); break;
        }
    }
    return b.finish(pool.back());
}

}  // namespace

TEST_CASE("constant circuits")
{
    Builder b;
    b.add_input("x", "x", 1);
    auto c = b.finish(b.one());
    CHECK(simulate(c, {{"x", encode_unsigned(0, 1)}}).output);
    Builder b0;
    b0.add_input("x", "x", 1);
    auto c0 = b0.finish(b0.zero());
    CHECK_FALSE(simulate(c0, {{"x", encode_unsigned(1, 1)}}).output);
    CHECK(c0.dead_inputs == std::vector<Wire>{0});
}

TEST_CASE("builder folds constants and trivial identities")
{
    Builder b;
    const auto x = b.add_input("x", "x", 2);
    const std::size_t base = b.size();
    CHECK(b.and_(x[0], b.zero()) == b.zero());
    CHECK(b.and_(x[0], b.one()) == x[0]);
    CHECK(b.or_(x[0], b.one()) == b.one());
    CHECK(b.xor_(x[0], x[0]) == b.zero());
    CHECK(b.and_(x[0], x[0]) == x[0]);
    const Wire nx = b.not_(x[0]);
    CHECK(b.not_(nx) == x[0]);
    CHECK(b.and_(x[0], nx) == b.zero());
    CHECK(b.or_(nx, x[0]) == b.one());
    const Wire flipped = b.xor_(x[1], b.one());
    CHECK(b.is_const(flipped) == false);
    CHECK(b.size() <= base + 4);  // two constants and two NOTs
    CHECK_THROWS_AS(b.add_input("late", "x", 1), InvalidParameter);
}

TEST_CASE("inputs occupy the lowest wires and buses are validated")
{
    Builder b;
    const auto a = b.add_input("a", "a", 3);
    const auto bb = b.add_input("b", "b", 2);
    CHECK(a == Bits{0, 1, 2});
    CHECK(bb == Bits{3, 4});
    CHECK_THROWS_AS(b.add_input("a", "a", 1), InvalidParameter);
    CHECK_THROWS_AS(b.add_input("z", "z", 0), InvalidParameter);
    const auto c = b.finish(b.and_(a[0], bb[0]));
    CHECK(c.bus("a").signedness == Signedness::SignMagnitude);
    CHECK(c.bus("b").signedness == Signedness::Unsigned);
    CHECK(c.input_bit_count() == 5);
    CHECK(input_bit_count(c) == 5);
    CHECK(c.gate_count() == 1);
    CHECK(c.dead_inputs == std::vector<Wire>{1, 2, 4});
}

TEST_CASE("adder block: 3 + 5 = 8")
{
    Builder b;
    const auto x = b.add_input("x", "x", 4);
    const auto y = b.add_input("y", "y", 4);
    const auto s = arith::add(b, x, y);
    const auto c = b.finish(s.back());
    const auto r = simulate(c, {{"x", encode_unsigned(3, 4)}, {"y", encode_unsigned(5, 4)}});
    std::vector<std::uint8_t> bits;
    for (auto w : s) bits.push_back(r.wires[w]);
    CHECK(decode_unsigned(bits) == 8);
}

TEST_CASE("simulate rejects bad bindings")
{
    Builder b;
    const auto x = b.add_input("x", "x", 2);
    const auto c = b.finish(b.xor_(x[0], x[1]));
    CHECK_THROWS_AS(simulate(c, {}), InvalidParameter);
    CHECK_THROWS_AS(simulate(c, {{"x", encode_unsigned(1, 3)}}), InvalidParameter);
    CHECK_THROWS_AS(simulate(c, {{"x", encode_unsigned(1, 2)}, {"q", encode_unsigned(0, 1)}}), InvalidParameter);
    CHECK_THROWS_AS(encode_unsigned(4, 2), InvalidParameter);
}

TEST_CASE("sign-magnitude encoding")
{
    for (std::int64_t v = -7; v <= 7; ++v) {
        const auto bv = encode_sign_magnitude(v, 4);
        CHECK(bv.bits.size() == 4);
        CHECK(decode_sign_magnitude(bv.bits) == v);
        CHECK(bv.bits.back() == (v < 0 ? 1 : 0));
    }
    CHECK_THROWS_AS(encode_sign_magnitude(8, 4), InvalidParameter);
    const std::vector<std::uint8_t> neg_zero{0, 0, 0, 1};
    CHECK(decode_sign_magnitude(neg_zero) == 0);
}

TEST_CASE("bitsliced simulation agrees with scalar simulation")
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto c = random_circuit(rng, 6, 40);
        std::vector<InputPoint> pts;
        for (unsigned v = 0; v < 64; ++v) pts.push_back({{"x", encode_unsigned(v, 6)}});
        const auto words = simulate_lanes(c, pack_lanes(c, pts));
        for (unsigned v = 0; v < 64; ++v) {
            const auto r = simulate(c, pts[v]);
            CHECK(((words[c.output] >> v) & 1u) == r.output);
        }
    }
}

TEST_CASE("dump and parse round trip")
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        Builder b;
        const auto a = b.add_input("a", "a", 3);
        const auto x = b.add_input("e1", "e", 2);
        Wire acc = b.xor_(a[0], x[1]);
        for (int i = 0; i < 20; ++i) acc = (rng() & 1) ? b.and_(acc, a[rng() % 3]) : b.or_(b.not_(acc), x[rng() % 2]);
        auto c = b.finish(acc, 14, t % 2 ? "toy.manifest" : "");
        const std::string text = dump_string(c);
        std::istringstream is(text);
        const auto back = parse(is);
        CHECK(back == c);
        CHECK(dump_string(back) == text);
    }
}

TEST_CASE("parse rejects malformed circuits")
{
    std::istringstream forward("c inputs bus:x:1:x\n1 AND 0 2\n2 NOT 0\nout 2\n");
    CHECK_THROWS_AS(parse(forward), InvalidParameter);
    std::istringstream noheader("1 NOT 0\nout 1\n");
    CHECK_THROWS_AS(parse(noheader), InvalidParameter);
    std::istringstream badkind("c inputs bus:x:1:x\n1 NAND 0 0\nout 1\n");
    CHECK_THROWS_AS(parse(badkind), InvalidParameter);
    std::istringstream noout("c inputs bus:x:1:x\n1 NOT 0\n");
    CHECK_THROWS_AS(parse(noout), InvalidParameter);
    std::istringstream gap("c inputs bus:x:1:x\n2 NOT 0\nout 2\n");
    CHECK_THROWS_AS(parse(gap), InvalidParameter);
}

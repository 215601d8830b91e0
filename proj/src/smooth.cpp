#include "smoothsat/smooth.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "smoothsat/errors.hpp"

namespace smoothsat::smooth {

std::vector<std::uint64_t> primes_upto(std::uint64_t y)
{
    if (y < 2) {
        throw InvalidParameter("primes_upto needs y >= 2");
    }
    std::vector<bool> composite(y + 1, false);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t i = 2; i <= y; ++i) {
        if (composite[i]) {
            continue;
        }
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= y; j += i) {
            composite[j] = true;
        }
    }
    return primes;
}

std::optional<std::vector<std::uint32_t>> factor_exponents(const Integer& n,
                                                           const std::vector<std::uint64_t>& primes)
{
    if (sgn(n) <= 0) {
        throw InvalidParameter("factor_exponents needs n >= 1");
    }
    std::vector<std::uint32_t> exps(primes.size(), 0);
    Integer rest = n;
    for (std::size_t i = 0; i < primes.size() && rest > 1; ++i) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), primes[i]) != 0) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), primes[i]);
            ++exps[i];
        }
    }
    if (rest != 1) {
        return std::nullopt;
    }
    return exps;
}

std::optional<std::vector<std::uint32_t>> factor_exponents(const Integer& n, std::uint64_t y)
{
    return factor_exponents(n, primes_upto(y));
}

bool is_smooth(const Integer& n, std::uint64_t y)
{
    Integer a = abs(n);
    return sgn(a) > 0 && factor_exponents(a, y).has_value();
}

std::uint64_t omega(const Integer& n)
{
    if (n < 2) {
        throw InvalidParameter("omega needs n >= 2");
    }
    std::uint64_t count = 0;
    Integer rest = n;
    for (unsigned long p = 2; Integer(p) * p <= rest; ++p) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++count;
        }
    }
    if (rest > 1) {
        ++count;
    }
    return count;
}

std::vector<SmoothnessWitness> find_T(const FactoringInstance& inst, std::size_t limit)
{
    std::vector<SmoothnessWitness> out;
    if (limit == 0) {
        return out;
    }
    const auto primes = primes_upto(inst.y);
    const auto u = static_cast<std::int64_t>(inst.u);
    for (std::int64_t b = 1; b <= u; ++b) {
        for (std::int64_t a = -u; a <= u; ++a) {
            if (std::gcd(a, b) != 1) {
                continue;
            }
            const Integer f = abs(params::eval_F(inst, a, b));
            if (sgn(f) == 0) {
                continue;
            }
            auto exps = factor_exponents(f, primes);
            if (!exps) {
                continue;
            }
            out.push_back({a, b, std::move(*exps)});
            if (out.size() == limit) {
                return out;
            }
        }
    }
    return out;
}

ExponentVectorMod2 exponent_vector_mod2(const SmoothnessWitness& w)
{
    ExponentVectorMod2 v;
    v.bits.reserve(w.exponents.size());
    for (auto e : w.exponents) {
        v.bits.push_back(static_cast<std::uint8_t>(e & 1U));
    }
    return v;
}

bool verify_witness(const FactoringInstance& inst, const SmoothnessWitness& w)
{
    if (!SearchBox{inst.u}.contains(w.a, w.b) || std::gcd(w.a, w.b) != 1) {
        return false;
    }
    const auto primes = primes_upto(inst.y);
    if (w.exponents.size() != primes.size()) {
        return false;
    }
    Integer prod = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        prod *= pow(Integer(static_cast<unsigned long>(primes[i])), w.exponents[i]);
    }
    return prod == abs(params::eval_F(inst, w.a, w.b));
}

void write_witnesses(std::ostream& os, const std::vector<SmoothnessWitness>& ws)
{
    for (const auto& w : ws) {
        os << w.a << ' ' << w.b << " :";
        for (auto e : w.exponents) {
            os << ' ' << e;
        }
        os << '\n';
    }
}

std::vector<SmoothnessWitness> read_witnesses(std::istream& is)
{
    std::vector<SmoothnessWitness> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        SmoothnessWitness w;
        std::string colon;
        if (!(ls >> w.a >> w.b >> colon) || colon != ":") {
            throw InvalidParameter("malformed witness line: " + line);
        }
        long long e = 0;
        while (ls >> e) {
            if (e < 0) {
                throw InvalidParameter("negative exponent in witness line: " + line);
            }
            w.exponents.push_back(static_cast<std::uint32_t>(e));
        }
        if (!ls.eof()) {
            throw InvalidParameter("malformed witness line: " + line);
        }
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace smoothsat::smooth

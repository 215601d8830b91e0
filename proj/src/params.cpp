#include "smoothsat/params.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "smoothsat/errors.hpp"

namespace smoothsat::params {

namespace {

double l_value_unchecked(double ln_x, double a, double b)
{
    return std::exp(b * std::pow(ln_x, a) * std::pow(std::log(ln_x), 1.0 - a));
}

std::uint64_t round_clamped(double v, std::uint64_t lo)
{
    if (!std::isfinite(v) || v > 1.8e19) {
        throw InvalidParameter("derived parameter overflows 64 bits");
    }
    const auto r = static_cast<std::uint64_t>(std::llround(v));
    return r < lo ? lo : r;
}

void validate_N(const Integer& N)
{
    if (N < 15) {
        throw InvalidParameter("N must be >= 15, got " + to_string(N));
    }
    if (mpz_even_p(N.get_mpz_t()) != 0) {
        throw InvalidParameter("N must be odd, got " + to_string(N));
    }
}

bool exceeds_two_pow_d2(const Integer& N, unsigned d)
{
    return N > pow(Integer(2), static_cast<unsigned long>(d) * d);
}

}  // namespace

double l_value(const Integer& x, double a, double b)
{
    if (x < 16) {
        throw InvalidParameter("l_value needs x >= 16");
    }
    return l_value_unchecked(smoothsat::log(x), a, b);
}

std::vector<Integer> base_m_digits(const Integer& N, const Integer& m)
{
    if (m < 2) {
        throw InvalidParameter("base m must be >= 2");
    }
    std::vector<Integer> digits;
    Integer rest = N;
    while (sgn(rest) > 0) {
        Integer q;
        Integer r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), m.get_mpz_t());
        digits.push_back(r);
        rest = q;
    }
    return digits;
}

FactoringInstance make_instance(const Integer& N, unsigned d, std::uint64_t y, std::uint64_t u,
                                std::uint64_t seed)
{
    validate_N(N);
    if (d < 1) {
        throw InvalidParameter("degree must be >= 1");
    }
    if (!exceeds_two_pow_d2(N, d)) {
        throw InvalidParameter("N must exceed 2^(d^2)");
    }
    if (y < 2) {
        throw InvalidParameter("smoothness bound y must be >= 2");
    }
    if (u < 1) {
        throw InvalidParameter("box bound u must be >= 1");
    }
    FactoringInstance inst;
    inst.N = N;
    inst.d = d;
    inst.m = root_floor(N, d);
    inst.coeffs = base_m_digits(N, inst.m);
    if (inst.coeffs.size() != static_cast<std::size_t>(d) + 1) {
        throw InvalidParameter("base-m expansion does not have d+1 digits");
    }
    inst.y = y;
    inst.u = u;
    inst.seed = seed;
    return inst;
}

unsigned degree_for(const Integer& N, double delta)
{
    const double ln_n = smoothsat::log(N);
    const double raw = delta * std::cbrt(ln_n) / std::cbrt(std::log(ln_n));
    long d = std::max(2L, std::lround(raw));
    while (d > 1 && !exceeds_two_pow_d2(N, static_cast<unsigned>(d))) {
        --d;
    }
    return static_cast<unsigned>(d);
}

FactoringInstance derive_instance(const Integer& N, const analysis::SpeedupProfile& profile,
                                  std::uint64_t seed)
{
    validate_N(N);
    if (!(profile.beta > 0.0) || !(profile.delta > 0.0) || !(profile.epsilon > 0.0)) {
        throw InvalidParameter("speedup profile needs positive beta, delta, epsilon");
    }
    const double ln_n = smoothsat::log(N);
    const unsigned d = degree_for(N, profile.delta);
    const std::uint64_t y = round_clamped(l_value_unchecked(ln_n, 1.0 / 3.0, profile.beta), 2);
    const std::uint64_t u = round_clamped(l_value_unchecked(ln_n, 1.0 / 3.0, profile.epsilon), 2);
    return make_instance(N, d, y, u, seed);
}

Integer eval_g(const FactoringInstance& inst, std::int64_t a, std::int64_t b)
{
    // Homogeneous Horner: h <- h a + c_i (-b)^(d-i).
    const Integer A(static_cast<long>(a));
    const Integer neg_b(static_cast<long>(-b));
    Integer h = inst.coeffs[inst.d];
    Integer nb_pow = 1;
    for (unsigned k = 1; k <= inst.d; ++k) {
        nb_pow *= neg_b;
        h = h * A + inst.coeffs[inst.d - k] * nb_pow;
    }
    return h;
}

Integer eval_F(const FactoringInstance& inst, std::int64_t a, std::int64_t b)
{
    const Integer linear = Integer(static_cast<long>(a)) + Integer(static_cast<long>(b)) * inst.m;
    return linear * eval_g(inst, a, b);
}

Integer bound_F(const FactoringInstance& inst)
{
    const Integer n_two_over_d = root_ceil(inst.N * inst.N, inst.d);
    const Integer u(static_cast<unsigned long>(inst.u));
    return Integer(2 * (inst.d + 1)) * n_two_over_d * pow(u, inst.d + 1);
}

std::size_t bound_width(const FactoringInstance& inst) { return bitlen(bound_F(inst)); }

void write_manifest(std::ostream& os, const FactoringInstance& inst)
{
    os << "N " << to_string(inst.N) << '\n';
    os << "d " << inst.d << '\n';
    os << "m " << to_string(inst.m) << '\n';
    os << "coeffs";
    for (const auto& c : inst.coeffs) {
        os << ' ' << to_string(c);
    }
    os << '\n';
    os << "y " << inst.y << '\n';
    os << "u " << inst.u << '\n';
    os << "seed " << inst.seed << '\n';
}

std::string manifest_string(const FactoringInstance& inst)
{
    std::ostringstream os;
    write_manifest(os, inst);
    return os.str();
}

FactoringInstance read_manifest(std::istream& is)
{
    std::map<std::string, std::vector<std::string>> kv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::vector<std::string> vals;
        std::string v;
        while (ls >> v) {
            vals.push_back(v);
        }
        kv[key] = std::move(vals);
    }
    auto one = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end() || it->second.size() != 1) {
            throw InvalidParameter("manifest: missing or malformed key '" + key + "'");
        }
        return it->second.front();
    };
    auto u64 = [&](const std::string& key) {
        const Integer v = parse_integer(one(key));
        if (sgn(v) < 0 || bitlen(v) > 64) {
            throw InvalidParameter("manifest: '" + key + "' out of range");
        }
        return static_cast<std::uint64_t>(std::stoull(one(key)));
    };

    const Integer N = parse_integer(one("N"));
    const auto d = static_cast<unsigned>(u64("d"));
    FactoringInstance inst = make_instance(N, d, u64("y"), u64("u"), u64("seed"));

    // Recorded m and coefficients must agree with the recomputed expansion.
    if (parse_integer(one("m")) != inst.m) {
        throw InvalidParameter("manifest: m disagrees with floor(N^(1/d))");
    }
    auto it = kv.find("coeffs");
    if (it == kv.end() || it->second.size() != inst.coeffs.size()) {
        throw InvalidParameter("manifest: coeffs missing or wrong length");
    }
    for (std::size_t i = 0; i < inst.coeffs.size(); ++i) {
        if (parse_integer(it->second[i]) != inst.coeffs[i]) {
            throw InvalidParameter("manifest: coefficient mismatch at index " + std::to_string(i));
        }
    }
    return inst;
}

FactoringInstance load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open manifest " + path);
    }
    return read_manifest(in);
}

void save_manifest(const std::string& path, const FactoringInstance& inst)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot write manifest " + path);
    }
    write_manifest(out, inst);
    if (!out) {
        throw IoFailure("write failed for manifest " + path);
    }
}

}  // namespace smoothsat::params

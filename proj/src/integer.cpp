#include "smoothsat/integer.hpp"

#include <cmath>

#include "smoothsat/errors.hpp"

namespace smoothsat {

Integer parse_integer(std::string_view text)
{
    std::string s(text);
    if (s.empty()) {
        throw InvalidParameter("empty integer literal");
    }
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) {
        throw InvalidParameter("malformed integer literal: " + s);
    }
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw InvalidParameter("malformed integer literal: " + s);
        }
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    return Integer(s, 10);
}

double log(const Integer& x)
{
    if (sgn(x) <= 0) {
        throw InvalidParameter("log of a non-positive integer");
    }
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace smoothsat

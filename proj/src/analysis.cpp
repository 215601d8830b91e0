#include "smoothsat/analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "smoothsat/errors.hpp"

namespace smoothsat::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Minimum {
    double x;
    double fx;
};

// Coarse grid to bracket the global minimum, then golden-section refinement inside
// the bracketing cell pair. The grid guards against the kink of max(., .) and the
// pole at 6 beta / delta = 1 confusing a pure golden-section start.
Minimum bracketed_minimize(const std::function<double(double)>& f, double lo, double hi, int grid,
                           double tol)
{
    double best_x = lo;
    double best_f = kInf;
    int best_i = 0;
    for (int i = 0; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            best_i = i;
        }
    }
    if (!std::isfinite(best_f)) {
        throw ConvergenceFailure("objective is infinite on the whole search interval");
    }
    if (best_i == 0 || best_i == grid) {
        throw ConvergenceFailure("minimum sits on the search-interval boundary");
    }
    const double step = (hi - lo) / grid;
    double a = best_x - step;
    double b = best_x + step;

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 500 && (b - a) > tol * (1.0 + std::abs(a)); ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if ((b - a) > tol * (1.0 + std::abs(a)) * 10.0) {
        throw ConvergenceFailure("golden-section refinement stalled");
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(what) + " must be a positive finite number");
    }
}

}  // namespace

SpeedupProfile closed_form(double gamma)
{
    require_positive(gamma, "gamma");
    SpeedupProfile p;
    p.gamma = gamma;
    p.kappa = 2.0;
    const double two_thirds_gamma = 2.0 / (3.0 * gamma);
    p.beta = std::cbrt(two_thirds_gamma * two_thirds_gamma * (gamma + 1.0));
    p.delta = std::cbrt(12.0 * gamma / ((gamma + 1.0) * (gamma + 1.0)));
    p.epsilon = p.beta * (gamma + 1.0) / 2.0;
    p.alpha = std::cbrt(32.0 * (gamma + 1.0) / (9.0 * gamma * gamma));
    return p;
}

double tight_epsilon(double beta, double delta)
{
    const double denom = 2.0 - delta / (3.0 * beta);
    if (!(denom > 0.0)) {
        return kInf;
    }
    return (beta + 2.0 / (3.0 * beta * delta)) / denom;
}

double search_exponent(double gamma, double beta, double epsilon)
{
    return 2.0 * epsilon / gamma + beta * (1.0 - 1.0 / gamma);
}

double runtime_exponent(double gamma, double kappa, double beta, double delta)
{
    const double eps = tight_epsilon(beta, delta);
    if (!std::isfinite(eps)) {
        return kInf;
    }
    return std::max(search_exponent(gamma, beta, eps), kappa * beta);
}

SpeedupProfile numeric_optimum(double gamma, double kappa)
{
    require_positive(gamma, "gamma");
    require_positive(kappa, "kappa");

    constexpr double kBetaMax = 50.0;
    constexpr double kDeltaMax = 20.0;
    constexpr double kTol = 1e-12;

    auto best_beta = [&](double delta) {
        const double lo = delta / 6.0;
        return bracketed_minimize(
            [&](double beta) { return runtime_exponent(gamma, kappa, beta, delta); }, lo, kBetaMax,
            4000, kTol);
    };
    const Minimum outer = bracketed_minimize([&](double delta) { return best_beta(delta).fx; },
                                             1e-3, kDeltaMax, 400, kTol);

    SpeedupProfile p;
    p.gamma = gamma;
    p.kappa = kappa;
    p.delta = outer.x;
    const Minimum inner = best_beta(p.delta);
    p.beta = inner.x;
    p.epsilon = tight_epsilon(p.beta, p.delta);
    p.alpha = inner.fx;

    // A slack (non-tight) epsilon only lengthens the search; confirm on a band.
    for (int k = 1; k <= 20; ++k) {
        const double eps = p.epsilon * (1.0 + 0.01 * k);
        const double v = std::max(search_exponent(gamma, p.beta, eps), kappa * p.beta);
        if (v < p.alpha - 1e-9) {
            throw ConvergenceFailure("non-tight epsilon beats the tight optimum");
        }
    }
    return p;
}

std::vector<CurvePoint> gamma_curve(double gamma_min, double gamma_max, int steps, double kappa)
{
    if (!(gamma_min > 0.0) || !(gamma_max > gamma_min) || steps < 2) {
        throw InvalidParameter("gamma_curve needs 0 < gamma_min < gamma_max and steps >= 2");
    }
    std::vector<CurvePoint> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double g = gamma_min + (gamma_max - gamma_min) * i / (steps - 1);
        const bool marked = std::abs(g - 1.0) < 1e-12 || std::abs(g - 2.0) < 1e-12;
        out.push_back({g, numeric_optimum(g, kappa).alpha, marked});
    }
    return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve)
{
    std::ostringstream os;
    os.precision(10);
    os << "gamma,alpha,annotated\n";
    for (const auto& pt : curve) {
        os << pt.gamma << ',' << pt.alpha << ',' << (pt.annotated ? 1 : 0) << '\n';
    }
    return os.str();
}

ConstraintReport check_constraints(const SpeedupProfile& p)
{
    constexpr double kTol = 1e-6;
    ConstraintReport r;
    r.six_beta_over_delta = 6.0 * p.beta / p.delta;
    r.expected_ratio = 2.0 * (1.0 + 1.0 / p.gamma);
    r.smoothness_exponent = p.beta - 2.0 * p.epsilon;
    r.constraint_slack =
        2.0 * p.epsilon - p.beta - (2.0 / p.delta + p.delta * p.epsilon) / (3.0 * p.beta);
    r.ratio_ok = r.six_beta_over_delta > 1.0 &&
                 std::abs(r.six_beta_over_delta - r.expected_ratio) <= kTol;
    r.constraint_ok = r.constraint_slack >= -kTol;
    return r;
}

// 12 gamma beta^2 - 2 (gamma+1) delta beta - 8 / delta = 0 after substituting
// epsilon = beta (gamma+1) / 2 into the tight smoothness constraint.
double balanced_beta(double gamma, double delta)
{
    const double g1 = gamma + 1.0;
    return (g1 * delta + std::sqrt(g1 * g1 * delta * delta + 96.0 * gamma / delta)) / (12.0 * gamma);
}

double discarded_beta_root(double gamma, double delta)
{
    const double g1 = gamma + 1.0;
    return (g1 * delta - std::sqrt(g1 * g1 * delta * delta + 96.0 * gamma / delta)) / (12.0 * gamma);
}

}  // namespace smoothsat::analysis

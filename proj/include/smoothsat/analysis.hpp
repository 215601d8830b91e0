#pragma once

#include <string>
#include <vector>

namespace smoothsat::analysis {

/// Exponents of an NFS run whose relation search has a gamma-speedup.
///
/// y = L^beta, u = L^epsilon, d = delta (ln N)^{1/3} (ln ln N)^{-1/3}, and the
/// total runtime is L^alpha with L = L_N[1/3, 1]. kappa is the coefficient of the
/// linear-algebra step, modelled as L^{kappa beta}.
struct SpeedupProfile {
    double gamma = 1.0;
    double kappa = 2.0;
    double beta = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
};

/// Balanced optimum for kappa = 2 in closed form.
SpeedupProfile closed_form(double gamma);

/// Smallest epsilon meeting the smoothness-count constraint for (beta, delta);
/// +inf when 6 beta / delta <= 1.
double tight_epsilon(double beta, double delta);

/// Time exponent of the relation search: 2 eps / gamma + beta (1 - 1/gamma).
double search_exponent(double gamma, double beta, double epsilon);

/// max(search exponent, kappa beta) with epsilon taken tight.
double runtime_exponent(double gamma, double kappa, double beta, double delta);

/// Minimizes the runtime exponent over (beta, delta) by nested golden-section search.
/// Throws ConvergenceFailure if the minimizer lands on a search-interval boundary.
SpeedupProfile numeric_optimum(double gamma, double kappa);

struct CurvePoint {
    double gamma;
    double alpha;
    bool annotated;  ///< gamma == 1 or gamma == 2
};

/// Evenly spaced samples of alpha(gamma); steps >= 2.
std::vector<CurvePoint> gamma_curve(double gamma_min, double gamma_max, int steps, double kappa);

std::string curve_csv(const std::vector<CurvePoint>& curve);

struct ConstraintReport {
    double six_beta_over_delta = 0.0;
    double expected_ratio = 0.0;        ///< 2 (1 + 1/gamma)
    double smoothness_exponent = 0.0;   ///< beta - 2 epsilon
    double constraint_slack = 0.0;      ///< 2 eps - beta - (2/delta + delta eps)/(3 beta)
    bool ratio_ok = false;
    bool constraint_ok = false;
    bool ok() const { return ratio_ok && constraint_ok; }
};

ConstraintReport check_constraints(const SpeedupProfile& p);

/// The root of the proof's quadratic in beta that the closed form discards.
double discarded_beta_root(double gamma, double delta);

/// Both roots' partner: the positive root the closed form minimizes over delta.
double balanced_beta(double gamma, double delta);

}  // namespace smoothsat::analysis

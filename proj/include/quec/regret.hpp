#pragma once

#include <vector>

namespace quec {

// Instantaneous-regret model
//   g' = -eta pi_max g^2 + 2 p s(t)^2 pi nu sin(2 nu t),
//   s(t) = |cos(sin(pi nu t / 2))| + |sin(sin(pi nu t / 2))|,
// integrated with classical RK4; G(t) = int_0^t g by the trapezoid rule on
// the internal steps.
struct RegretOptions {
    double eta = 0.1;
    double nu = 0.0;
    double p = 0.1;
    double horizon = 100.0;
    double g0 = 1.0;
    double pi_max = 1.0;
    int grid = 1000;            // output points after t = 0
    int steps_per_period = 40;  // internal steps per forcing period, at least
    // Project g onto [0, inf) after every step. Off by default: the signed
    // forcing term can drive g negative, after which -eta g^2 diverges.
    bool floor_at_zero = false;
};

struct RegretTrace {
    std::vector<double> t;  // grid + 1 points, t[0] = 0
    std::vector<double> g;
    std::vector<double> G;
    int substeps = 0;   // internal steps per grid interval
    int halvings = 0;   // extra halvings forced by the instability guard
    // Set when halving the step does not remove a blow-up; the trace then
    // stops at the last grid point reached and diverged_at marks where.
    bool diverged = false;
    double diverged_at = 0.0;
};

double regret_forcing(double t, double nu, double p);
double regret_rhs(double t, double g, const RegretOptions& o);
RegretTrace regret_simulate(const RegretOptions& o);

// nu = 0 closed form: G(T) = ln(1 + eta pi_max g0 T) / (eta pi_max).
double regret_reference(double eta, double g0, double T, double pi_max = 1.0);

}  // namespace quec

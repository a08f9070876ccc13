#include "quec/regret.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <algorithm>

namespace quec {

namespace {

// Beyond this magnitude the trajectory is treated as diverged.
constexpr double kBlowup = 1e12;
constexpr int kMaxHalvings = 8;

}  // namespace

double regret_forcing(double t, double nu, double p) {
    const double pi = std::numbers::pi;
    const double u = std::sin(pi * nu * t / 2.0);
    const double s = std::abs(std::cos(u)) + std::abs(std::sin(u));
    return 2.0 * p * s * s * pi * nu * std::sin(2.0 * nu * t);
}

double regret_rhs(double t, double g, const RegretOptions& o) {
    return -o.eta * o.pi_max * g * g + regret_forcing(t, o.nu, o.p);
}

RegretTrace regret_simulate(const RegretOptions& o) {
    if (!(o.eta > 0.0)) throw std::invalid_argument("regret: eta must be > 0");
    if (!(o.horizon > 0.0)) throw std::invalid_argument("regret: horizon must be > 0");
    if (o.grid < 1) throw std::invalid_argument("regret: grid must be >= 1");
    if (o.steps_per_period < 1) throw std::invalid_argument("regret: steps_per_period must be >= 1");
    if (o.p < 0.0) throw std::invalid_argument("regret: p must be >= 0");

    const double dt = o.horizon / o.grid;
    int sub = 1;
    if (o.nu != 0.0 && o.p != 0.0) {
        // Period of sin(2 nu t) is pi / |nu|; s(t) varies on the slower scale.
        const double period = std::numbers::pi / std::abs(o.nu);
        sub = std::max(1, static_cast<int>(std::ceil(dt * o.steps_per_period / period)));
    }

    RegretTrace tr;
    tr.t.assign(o.grid + 1, 0.0);
    tr.g.assign(o.grid + 1, 0.0);
    tr.G.assign(o.grid + 1, 0.0);
    tr.g[0] = o.g0;
    tr.substeps = sub;

    for (int i = 0; i < o.grid; ++i) {
        const double t0 = i * dt;
        int halvings = 0;
        while (true) {
            const int m = sub << halvings;
            const double h = dt / m;
            double g = tr.g[i], G = tr.G[i];
            bool ok = true;
            for (int k = 0; k < m; ++k) {
                const double t = t0 + k * h;
                const double k1 = regret_rhs(t, g, o);
                const double k2 = regret_rhs(t + h / 2, g + h / 2 * k1, o);
                const double k3 = regret_rhs(t + h / 2, g + h / 2 * k2, o);
                const double k4 = regret_rhs(t + h, g + h * k3, o);
                double next = g + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
                if (o.floor_at_zero) next = std::max(next, 0.0);
                if (!std::isfinite(next) || std::abs(next) > kBlowup) {
                    ok = false;
                    break;
                }
                G += h / 2 * (g + next);
                g = next;
            }
            if (ok) {
                tr.t[i + 1] = (i + 1) * dt;
                tr.g[i + 1] = g;
                tr.G[i + 1] = G;
                break;
            }
            if (++halvings > kMaxHalvings) {
                tr.diverged = true;
                tr.diverged_at = t0;
                tr.t.resize(i + 1);
                tr.g.resize(i + 1);
                tr.G.resize(i + 1);
                tr.halvings = kMaxHalvings;
                return tr;
            }
        }
        tr.halvings = std::max(tr.halvings, halvings);
    }
    return tr;
}

double regret_reference(double eta, double g0, double T, double pi_max) {
    const double a = eta * pi_max;
    return std::log1p(a * g0 * T) / a;
}

}  // namespace quec

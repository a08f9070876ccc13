#pragma once

#include <functional>
#include <vector>

namespace quec {

struct NelderMeadOptions {
    int budget = 200;         // maximum objective evaluations
    double initial_step = 0.25;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double f_tol = 1e-15;     // stop when the simplex value spread falls below this
    double x_tol = 1e-10;     // or when its diameter does
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool budget_exhausted = false;
};

// Minimizes f from x0. The start point is a simplex vertex, so the returned
// value is never worse than f(x0). Ties keep the earlier vertex.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace quec

#include "quec/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace quec {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts) {
    if (opts.budget < 1) throw std::invalid_argument("nelder_mead: budget must be >= 1");
    if (x0.empty()) throw std::invalid_argument("nelder_mead: empty start point");
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    auto out_of_budget = [&] { return res.evaluations >= opts.budget; };

    std::vector<std::vector<double>> pts{x0};
    std::vector<double> vals{eval(x0)};
    for (std::size_t i = 0; i < n && !out_of_budget(); ++i) {
        auto x = x0;
        x[i] += opts.initial_step;
        pts.push_back(x);
        vals.push_back(eval(x));
    }
    std::vector<std::size_t> order(pts.size());
    auto sort_simplex = [&] {
        order.resize(pts.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : order) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    auto converged = [&] {
        double diam = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[0][k]));
        return vals.back() - vals.front() <= opts.f_tol || diam <= opts.x_tol;
    };
    auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        // a + t (a - b)
        std::vector<double> r(n);
        for (std::size_t k = 0; k < n; ++k) r[k] = a[k] + t * (a[k] - b[k]);
        return r;
    };

    sort_simplex();
    if (pts.size() == n + 1) {
        while (!out_of_budget()) {
            if (converged()) break;
            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
            const auto& worst = pts[n];
            auto xr = combine(centroid, worst, opts.reflection);
            const double fr = eval(xr);
            if (fr < vals[0]) {
                if (out_of_budget()) {
                    pts[n] = xr;
                    vals[n] = fr;
                } else {
                    auto xe = combine(centroid, worst, opts.reflection * opts.expansion);
                    const double fe = eval(xe);
                    if (fe < fr) {
                        pts[n] = xe;
                        vals[n] = fe;
                    } else {
                        pts[n] = xr;
                        vals[n] = fr;
                    }
                }
            } else if (fr < vals[n - 1]) {
                pts[n] = xr;
                vals[n] = fr;
            } else if (!out_of_budget()) {
                const bool outside = fr < vals[n];
                auto xc = outside ? combine(centroid, worst, opts.reflection * opts.contraction)
                                  : combine(centroid, worst, -opts.contraction);
                const double fc = eval(xc);
                if (fc < (outside ? fr : vals[n])) {
                    pts[n] = xc;
                    vals[n] = fc;
                } else {
                    for (std::size_t i = 1; i <= n && !out_of_budget(); ++i) {
                        for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + opts.shrink * (pts[i][k] - pts[0][k]);
                        vals[i] = eval(pts[i]);
                    }
                }
            }
            sort_simplex();
        }
    }
    res.x = pts.front();
    res.f = vals.front();
    res.budget_exhausted = out_of_budget() && !converged();
    return res;
}

}  // namespace quec

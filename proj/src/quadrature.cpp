#include "radialfs/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace radialfs {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule g;
    if (n == 1) return {{0.0}, {2.0}};
    g.x.resize(n);
    g.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double w = 2.0 / ((1.0 - t * t) * dp * dp);
        g.x[i] = -t;
        g.x[n - 1 - i] = t;
        g.w[i] = w;
        g.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.x[n / 2] = 0.0;
    return g;
}

GaussRule gauss_legendre(int n, double a, double b) {
    GaussRule g = gauss_legendre(n);
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
        g.x[i] = c + h * g.x[i];
        g.w[i] *= h;
    }
    return g;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol, &err);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol);
}

}  // namespace radialfs

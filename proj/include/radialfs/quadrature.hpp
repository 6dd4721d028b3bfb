#pragma once

#include <functional>
#include <vector>

namespace radialfs {

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule on [-1, 1], or mapped affinely onto [a, b].
GaussRule gauss_legendre(int n);
GaussRule gauss_legendre(int n, double a, double b);

// Adaptive Gauss-Kronrod quadrature on a finite interval. Used by the
// verification suites as an oracle independent of the closed forms.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_depth = 18);

// Same, on [a, inf).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol = 1e-13);

}  // namespace radialfs

#pragma once

#include <span>

#include <Eigen/Dense>

#include "radialfs/specfun.hpp"

namespace radialfs {

// Dirichlet Green's function of D_{1-k} D_k - xi^2 on (0, 1) for one axial
// frequency, with G(1, rho) = 0 and regularity at the axis:
//   G(r, rho) = -I_k(|xi| r_<) Kt_k(|xi| r_>),
//   Kt_i(s) = K_i(s) - (-1)^{k-i} (K_k(|xi|) / I_k(|xi|)) I_i(s).
// At xi = 0 the limit kernels are used:
//   k >= 1: -(1/2k) r_<^k (r_>^{-k} - r_>^k),   k = 0: log r_>.
// All Bessel products are formed in scaled space.
class GreensKernel {
public:
    GreensKernel(int k, double xi);

    int order() const { return k_; }
    double frequency() const { return s_; }
    bool is_static() const { return s_ == 0.0; }

    double operator()(double r, double rho) const;

    // I_k(|xi| r) / I_k(|xi|); r^k when xi = 0.
    double boundary(double r) const;

    // K_k(|xi|) / I_k(|xi|); requires xi != 0.
    const SpecFunValue& ratio() const { return c_; }
    // Kt_i(x) for this kernel's k and xi, x > 0.
    SpecFunValue tilde_k(int i, double x) const;

    // G(r_a, rho_b) for all pairs.
    Eigen::MatrixXd matrix(std::span<const double> r, std::span<const double> rho) const;

private:
    double static_value(double r, double rho) const;

    int k_;
    double s_;
    SpecFunValue c_;
};

}  // namespace radialfs

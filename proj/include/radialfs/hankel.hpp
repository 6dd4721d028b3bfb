#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "radialfs/radial_ops.hpp"

namespace radialfs {

struct PlanValidation {
    double round_trip = 0.0;  // max over the family of ||H(Hf) - f|| / ||f||
    double parseval = 0.0;    // max of | ||f||^2 - ||Hf||^2 | / ||f||^2
    bool pass = false;
};

class PlanValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense quadrature realization of H_k[f](rho) = int_0^inf f(r) J_k(rho r) r dr:
// kernel(j, l) = J_k(rho_j r_l) w_l.
class HankelPlan {
public:
    // Gauss-Legendre grid truncated to (0, R] used for both r and rho.
    static constexpr int default_size = 512;
    static constexpr double default_extent = 40.0;

    // Reads or writes the binary cache in $RADIALFS_CACHE when set.
    static std::shared_ptr<const HankelPlan> create(int k, int N = default_size, double R = default_extent);
    static std::shared_ptr<const HankelPlan> create(int k, GridPtr r_grid, GridPtr rho_grid = nullptr);

    int k() const { return k_; }
    const GridPtr& r_grid() const { return r_; }
    const GridPtr& rho_grid() const { return rho_; }
    const Eigen::MatrixXd& kernel() const { return K_; }

    // Validation family r^{k+2j} e^{-a r^2}, j <= 3, a in {1/2, 1}.
    PlanValidation validate() const;

    void save(const std::string& path) const;
    // nullptr if the file is missing or does not describe this configuration
    static std::shared_ptr<const HankelPlan> load(const std::string& path, int k, const GridPtr& grid);

private:
    HankelPlan() = default;
    void build();

    int k_ = 0;
    GridPtr r_, rho_;
    Eigen::MatrixXd K_;
};

using PlanPtr = std::shared_ptr<const HankelPlan>;

// Plan of order |k| on the same grids as `like`, memoized per process.
PlanPtr plan_for_order(int k, const HankelPlan& like);

// Applies H_k to f (mode k or -k; H_{-k} = (-1)^k H_k). The result lives on the
// rho grid and keeps the mode tag. Writes a warning to stderr when f has not
// decayed at the outermost node.
ModeField hankel_transform(const HankelPlan& plan, const ModeField& f);

// || H_{k+n-2i}[D^{n-i}_{-k+i} D^i_k f] - (-1)^{n-i} rho^n H_k f || / || rho^n H_k f ||
double symbol_identity_residual(const HankelPlan& plan, const ModeField& f, int n, int i);
// || D~^{n-i}_{-k+i} D~^i_k H_k f - (-1)^{n-i} H_{k+n-2i}[r^n f] || / || r^n f ||, D~ acting in rho
double dual_symbol_identity_residual(const HankelPlan& plan, const ModeField& f, int n, int i);

// || (1 + rho^2)^{s/2} H_k f ||_{L^2_1}
double hankel_space_norm(const HankelPlan& plan, const ModeField& f, double s);
// ( sum_{n<=m} || rho^n H_k f ||^2 )^{1/2}, the Hankel form of the H^m_(k) norm
double hankel_symbol_norm(const HankelPlan& plan, const ModeField& f, int m);

// D(rho,u,w) = (2/pi) ((u^2 - (rho-w)^2)((rho+w)^2 - u^2))^{-1/2} inside the
// triangle band, 0 outside. Throws std::domain_error for non-positive arguments.
double triangle_kernel(double rho, double u, double w);

// int_0^inf D(rho, u, w) h(u) u du via t = u^2 and Gauss-Chebyshev nodes in t.
double triangle_integral(double rho, double w, const std::function<double(double u)>& h, int nodes = 64);

// Relative L^2_1 difference between H_{k+l}[fg] from the plan and the
// triangle-kernel double integral of H_k f and H_l g, over a Gauss rho-grid on
// (0, rho_max]. Both fields must be z-independent and on the plan grid.
double product_identity_residual(const HankelPlan& plan_k, const HankelPlan& plan_l,
                                 const ModeField& f, const ModeField& g,
                                 int quad_nodes = 128, double rho_max = 10.0);

}  // namespace radialfs

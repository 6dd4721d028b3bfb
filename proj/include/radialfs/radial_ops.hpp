#pragma once

#include <functional>
#include <vector>

#include "radialfs/radial_grid.hpp"

namespace radialfs {

// D_{nu_1} o ... o D_{nu_n} followed by d^axial/dz^axial; nu_n acts first.
struct BesselOpSpec {
    std::vector<double> indices;
    int axial = 0;
    // set by mixed(); D_0 on a mode-0 field is otherwise ambiguous in direction
    std::optional<int> mode_shift;

    // D^n_nu = D_{nu-n+1} ... D_{nu-1} D_nu
    static BesselOpSpec power(double nu, int n);
    // D^{n-i}_{-k+i} D^i_k d_z^axial, the mixed operator producing mode k+n-2i
    static BesselOpSpec mixed(int k, int n, int i, int axial = 0);
    // D^n_nu D^m_mu
    static BesselOpSpec compose(const BesselOpSpec& outer, const BesselOpSpec& inner);

    int order() const { return static_cast<int>(indices.size()); }

    // Coefficients a_m, m = 0..n, of the equivalent Euler operator
    // sum_m a_m r^{m-n} d^m/dr^m.
    std::vector<double> euler_coefficients() const;

    // mode after applying to a mode-k field
    int resulting_mode(int k) const;
};

// Stepwise: product of (diff matrix + diag(nu/r)), one factor per index.
// Well conditioned when every intermediate is a regular radial coefficient,
// which holds for the mixed operators acting on fields of matching mode.
// Euler: the composition expanded into sum_m a_m r^{m-n} d^m/dr^m, so every
// differentiation acts on the input; needed when intermediates are singular
// at r = 0 (generic index lists on fields not vanishing there).
enum class OpForm { Stepwise, Euler };

// Matrix realization of the radial part on a grid (n x n).
Eigen::MatrixXd bessel_matrix(const BesselOpSpec& spec, const RadialGrid& grid,
                              OpForm form = OpForm::Stepwise);

ModeField apply_bessel_op(const BesselOpSpec& spec, const ModeField& f,
                          OpForm form = OpForm::Stepwise);

double l21_norm(const ModeField& f);

// Evaluated in Euler form; both sides then differentiate only f itself.
double check_commutation(double nu, double mu, int n, int m, const ModeField& f);

// Mode-k radial coefficient of psi(x, y, z) by the trapezoid rule in theta.
// M = 0 selects the minimum admissible size 4|k| + 16.
using PlanarFunction = std::function<cplx(double x, double y, double z)>;
ModeField project_mode(const PlanarFunction& psi, int k, GridPtr grid,
                       std::optional<AxialGrid> axial = std::nullopt, int M = 0);

double leibniz_product(const ModeField& f, const ModeField& g, int n, int i, int p);

// u given through its derivatives: u(order, w) = u^{(order)}(w).
using AnalyticMap = std::function<cplx(int order, cplx w)>;
double compose_faadibruno(const AnalyticMap& u, const ModeField& f, int ell, int p);

// Relative residual between two fields, ||a - b|| / max(||b||, tiny).
double relative_residual(const ModeField& a, const ModeField& b);

}  // namespace radialfs

#pragma once

#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "radialfs/greens.hpp"
#include "radialfs/radial_grid.hpp"

namespace radialfs {

// Thrown when input data are not resolved by the axial grid.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    // Gauss nodes per panel of the product-integration rule.
    int panel_nodes = 24;
    // Panels on [r, 1] grow geometrically by this factor from the target r.
    double panel_ratio = 4.0;
    // Largest admissible share of spectral energy in the top octave.
    double top_octave_tol = 1e-8;
};

struct FrequencyCondition {
    double xi = 0.0;
    double condition = 0.0;  // 1-norm condition estimate of the radial kernel matrix
};

struct SolveDiagnostics {
    double boundary_defect = 0.0;    // ||u(1,.) - g|| / ||g|| (absolute when g = 0)
    double interior_residual = 0.0;  // ||(D_{1-k} D_k + d_z^2) u - f|| / ||f||
    double h2_norm = 0.0;
    std::vector<FrequencyCondition> per_frequency_condition;

    nlohmann::json to_json() const;
};

struct CylSolution {
    ModeField u;
    SolveDiagnostics diagnostics;
};

// Share of sum |v_hat|^2 in frequency bins with |xi| above half the Nyquist
// frequency. Zero for an all-zero input.
double top_octave_fraction(const Eigen::MatrixXcd& values);

// G_k(f) on the grid of f. f lives on a Gauss grid over (0, 1) with an axial
// grid. Negative k is solved as |k| (the operator depends on k only through k^2).
ModeField greens_apply(int k, const ModeField& f, const SolverOptions& opt = {});

// B_k(g): per-frequency multiplication of g_hat by I_k(|xi| r) / I_k(|xi|).
ModeField boundary_apply(int k, const Eigen::VectorXcd& g, GridPtr grid, const AxialGrid& axial,
                         const SolverOptions& opt = {});

// u = G_k(f) + B_k(g) with diagnostics.
CylSolution solve(int k, const ModeField& f, const Eigen::VectorXcd& g, const SolverOptions& opt = {});

// Relative defect of
//   1/2 <D_k u, D_k phi> + 1/2 <D_{-k} u, D_{-k} phi> + <d_z u, d_z phi> + <f, phi> = 0
// normalized by the sum of the magnitudes of the four terms. phi must vanish at r = 1.
double weak_form_residual(const ModeField& u, const ModeField& f, const ModeField& phi);

// int |w|^2 r dr dz / int (|D_k w|^2 + |D_{-k} w|^2) r dr dz; at most 1/8 when w(1, .) = 0.
double poincare_ratio(const ModeField& w);

// ( dz/N sum_j (1 + xi_j^2)^s |g_hat_j|^2 )^{1/2}
double axial_sobolev_norm(const Eigen::VectorXcd& g, const AxialGrid& axial, double s);

}  // namespace radialfs

#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "radialfs/radial_ops.hpp"

namespace radialfs {

// Terms are keyed by (p, n, i): the norm of D^{n-i}_{-k+i} D^i_k d_z^{p-n} f.
struct SobolevNormReport {
    int k = 0;
    int m = 0;
    std::map<std::tuple<int, int, int>, double> terms;
    double total = 0.0;

    nlohmann::json to_json() const;
};

// total^2 = sum_{p<=m} sum_{n<=p} 2^{-n} sum_i C(n,i) term(p,n,i)^2.
// Axial terms are skipped for z-independent fields.
SobolevNormReport sobolev_norm(const ModeField& f, int m);

enum class SpaceTag { C, Cb, S };
std::string to_string(SpaceTag t);
SpaceTag space_tag_from_string(const std::string& s);

struct MembershipWitness {
    int p = 0, n = 0, i = 0;
    // (k+n-2i) D^{n-i}_{-k+i} D^i_k d_z^{p-n} f at r = 0
    double boundary_value = 0.0;
    // size of the singular part at r = 0 (0 for a continuous derivative)
    double continuity_defect = 0.0;
    // sup-type defect: unboundedness for Cb, lack of decay for S
    double growth_defect = 0.0;
    bool ok = true;
};

struct MembershipVerdict {
    SpaceTag space = SpaceTag::C;
    int k = 0;
    int m = 0;
    bool verdict = true;
    std::vector<MembershipWitness> witnesses;

    const MembershipWitness* first_failure() const;
    nlohmann::json to_json() const;
};

struct MembershipOptions {
    double boundary_tol = 1e-6;
    double continuity_tol = 1e-6;
    // used by the callable form for sampling the sup conditions
    double R = 1.0;
};

// f(r, order) = d^order f / dr^order, valid at r = 0.
using RadialJet = std::function<double(double r, int order)>;

// Exact Taylor-jet check at r = 0; sup conditions sampled on (0, R).
MembershipVerdict classify_membership(const RadialJet& f, int k, int m,
                                      SpaceTag space = SpaceTag::C,
                                      const MembershipOptions& opt = {});
// Sampled form: r -> 0 values by degree-3 extrapolation from the 4 smallest
// nodes, the defect being its distance to the degree-2 extrapolant.
MembershipVerdict classify_membership(const ModeField& f, int m,
                                      SpaceTag space = SpaceTag::C,
                                      const MembershipOptions& opt = {});

// Lagrange extrapolation to r = 0 of each column from the first `points` nodes.
Eigen::VectorXcd extrapolate_to_origin(const ModeField& f, int points = 4);

// max over test fields of |LHS - RHS| / (||f|| ||phi||) for the weak form
//   (-1)^p <f, D^{n-i}_{k+n-i} D^i_{-k-n+2i} d_z^{p-n} phi> = <g, phi>,
// phi of mode -k-n+2i, <a,b> = 2 pi int int a b r dr dz (bilinear).
// g is the weak radial derivative D^{n-i}_{-k+i} D^i_k d_z^{p-n} f.
double weak_derivative_residual(const ModeField& f, const ModeField& g, int n, int i, int p,
                                const std::vector<ModeField>& phis);

// Test family r^{|l|} (1 - (r/R)^2)^6 e^{-a r^2} e^{-(z - z0)^2} over a few (a, z0).
std::vector<ModeField> weak_test_family(int mode, GridPtr grid, std::optional<AxialGrid> axial);

// g(z) = f(R, z) by barycentric extrapolation to r = R.
Eigen::VectorXcd trace_boundary(const ModeField& f);

// Right inverse of the trace: g(z) r^{|k|} chi(r), chi rising from 0 at r = 0 to 1 on [3R/4, R].
ModeField trace_extension(const Eigen::VectorXcd& g, int k, GridPtr grid,
                          std::optional<AxialGrid> axial);

// max_{0<=i<=n<=q<=p} sup |(r,z)|^{m1} |D^{n-i}_{-k+i} D^i_k d_z^{q-n} f|^{m2},
// sup over nodes, a refined interpolation grid and the r -> 0 extrapolant.
double schwartz_seminorm(const ModeField& f, int m1, int m2, int p);

// C^m_{(k)b} norm: the same sup with m1 = 0, m2 = 1.
double bounded_norm(const ModeField& f, int m);

}  // namespace radialfs

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace radialfs {

// Raised when a bound evaluation produces a non-finite intermediate.
class OverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Weighted radial integrals of |G_k|, |D_{+-k} G_k| and |D^2_{+-k} G_k|.
// With t the free radial variable (r or rho) and x = |xi| t:
//   I1 = rho^{-k}   int |G| r^{1+k} dr          I6 = rho^{3-k} int |D^2_k G| r^{k-2} dr
//   I2 = r^{1-k}    int |D_k G| rho^k drho      I7 = r^{3-k}   int |D^2_k G| rho^{k-2} drho
//   I3 = rho^{1-k}  int |D_k G| r^k dr          I8 = rho^{1-k} int |D^2_{-k} G| r^k dr
//   I4 = r^{-k}     int |D_{-k} G| rho^{k+1}    I9 = r^{1-k}   int |D^2_{-k} G| rho^k drho
//   I5 = rho^{-k}   int |D_{-k} G| r^{k+1} dr
// I6 and I7 are evaluated as the signed integrals (Kt_{k-2} changes sign on (0, 1)).
enum class BoundQuantity { I1, I2, I3, I4, I5, I6, I7, I8, I9 };

std::string to_string(BoundQuantity q);
BoundQuantity bound_quantity_from_string(const std::string& s);
std::vector<BoundQuantity> all_bound_quantities();

int min_order(BoundQuantity q);  // smallest admissible k
int max_power(BoundQuantity q);  // largest admissible q in |xi|^q

// |xi|^q I(arg, xi) from the closed forms. arg in (0, 1], xi != 0.
double bound_value(BoundQuantity which, int k, int q, double arg, double xi);

// Uniform bound stated for the quantity, if any (I1 with q = 2, and I6..I9).
std::optional<double> displayed_bound(BoundQuantity which, int k, int q);

// Log-uniform grid with a common step in arg and xi, so |xi| arg falls on a
// shared lattice and Bessel/Struve values are computed once per lattice point.
struct ScanGrid {
    double arg_max = 1.0;
    double arg_decades = 3.0;
    double xi_min = 1e-3;
    double xi_decades = 8.0;
    int points_per_decade = 67;

    int arg_points() const;
    int xi_points() const;
    double arg(int a) const;
    double xi(int b) const;
    double lattice(int n) const;  // value of arg(a) * xi(b) for a + b = n
};

struct LimitCheck {
    std::string label;
    double at = 0.0;
    double value = 0.0;
    double expected = 0.0;
    bool pass = false;
};

struct BoundScanReport {
    BoundQuantity which = BoundQuantity::I1;
    int k = 0;
    int q = 0;
    double max_value = 0.0;
    double argmax_arg = 0.0;
    double argmax_xi = 0.0;
    std::optional<double> bound;
    bool bound_pass = true;
    std::vector<LimitCheck> limits;

    bool pass() const;
    nlohmann::json to_json() const;
};

// Maximum of |xi|^q I over the grid, the displayed bound, and the small/large
// frequency limits of the majorants used to prove boundedness.
BoundScanReport bound_scan(BoundQuantity which, int k, int q, const ScanGrid& grid = {},
                           double limit_tol = 1e-3, double bound_tol = 1e-6);

// Closed-form integrals against I_l(s rho) and Kt_l(s rho), where Kt is the
// tilde-K of the order-k kernel at frequency s.
class BesselBlocks {
public:
    BesselBlocks(int k, double s);

    double block1_i(int l, double b) const;  // int_0^b I_l rho^{l+1}
    double block1_k(int l, double a) const;  // int_a^1 Kt_l rho^{l+1}
    double block2_i(int l, double b) const;  // int_0^b I_l rho^l
    double block2_k(int l, double a) const;  // int_a^1 Kt_l rho^l
    double block3_i(int l, double b) const;  // int_0^b I_l rho^{l-2}, l >= 2
    double block3_k(int l, double a) const;  // int_a^1 Kt_l rho^{l-2}, l >= 2
    double block4_i(int l, double b) const;  // int_0^b I_{l-2} rho^{l-2}, l >= 2
    double block4_k(int l, double a) const;  // int_a^1 Kt_{l-2} rho^{l-2}, l >= 2

private:
    int k_;
    double s_;
};

// W_k[M_k, Z_k](x) = x (M_k D_k Z_k - Z_k D_k M_k) for Z = I and Z = K; its
// differences give int_a^b Z_k(x) x^k dx.
double struve_wronskian_i(int k, double x);
double struve_wronskian_k(int k, double x);

}  // namespace radialfs

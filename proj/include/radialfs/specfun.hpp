#pragma once

#include <vector>

namespace radialfs {

// value = mantissa * exp(log_scale), with |mantissa| in [1/e, e) or zero.
struct SpecFunValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    static SpecFunValue make(double mantissa, double log_scale);
    double value() const;
    // log|value|; -inf for zero
    double log_abs() const;
    // value * exp(-shift) without forming the unscaled value
    double scaled(double shift) const;
};

SpecFunValue operator*(const SpecFunValue& a, const SpecFunValue& b);
SpecFunValue operator/(const SpecFunValue& a, const SpecFunValue& b);
// Sums are formed relative to the larger exponent.
SpecFunValue operator+(const SpecFunValue& a, const SpecFunValue& b);
SpecFunValue operator-(const SpecFunValue& a, const SpecFunValue& b);
SpecFunValue operator-(const SpecFunValue& a);
// x^p as a scaled value, x > 0
SpecFunValue scaled_pow(double x, double p);

// J_k(x), k >= 0, x >= 0.
double bessel_j(int k, double x);
// J_m(x) for any integer m via J_{-m} = (-1)^m J_m.
double bessel_j_signed(int m, double x);

// I_k(s), K_k(s) with the exponential growth/decay carried in log_scale.
SpecFunValue bessel_i_scaled(int k, double s);
SpecFunValue bessel_k_scaled(int k, double s);

// e^{-s} I_n(s) and e^{s} K_n(s) for n = 0..kmax (plain doubles).
std::vector<double> bessel_i_exp_seq(int kmax, double s);
std::vector<double> bessel_k_exp_seq(int kmax, double s);
double bessel_i_exp(int k, double s);
double bessel_k_exp(int k, double s);

// Rescaled modified Struve function of the second kind,
// M_k(s) = s^k \int_0^{pi/2} e^{-s cos t} sin^{2k} t dt.
double struve_m(int k, double s);
// M_0(s) ... M_kmax(s) from one adaptive pass, s > 0.
std::vector<double> struve_m_seq(int kmax, double s);
// s^{-k} M_k(s), finite at s = 0 for every k >= 1 (and for k = 0 when s > 0).
double struve_m_reduced(int k, double s);

// Modified Struve L_k(s) by its ascending series; small-to-moderate s only.
double struve_l_series(int k, double s);

}  // namespace radialfs

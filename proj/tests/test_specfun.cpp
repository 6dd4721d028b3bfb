#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "radialfs/quadrature.hpp"
#include "radialfs/specfun.hpp"

using namespace radialfs;

namespace {

// independent alternating power series for J_k, long double
long double j_power_series(int k, long double x) {
    long double t = std::pow(x / 2, k);
    for (int j = 1; j <= k; ++j) t /= j;
    long double sum = t;
    for (int m = 1; m < 200; ++m) {
        t *= -(x * x / 4) / (m * (long double)(k + m));
        sum += t;
    }
    return sum;
}

std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, double(i) / (n - 1));
    return v;
}

}  // namespace

TEST(BesselJ, TrivialValues) {
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1, 0.0), 0.0);
    EXPECT_EQ(bessel_j(7, 0.0), 0.0);
}

TEST(BesselJ, FirstZeroOfJ0) {
    long double a = 2.3L, b = 2.5L;
    for (int it = 0; it < 80; ++it) {
        long double m = 0.5L * (a + b);
        if ((j_power_series(0, a) > 0) == (j_power_series(0, m) > 0)) a = m;
        else b = m;
    }
    const double root = static_cast<double>(0.5L * (a + b));
    EXPECT_NEAR(root, 2.404825557695773, 1e-14);
    EXPECT_NEAR(bessel_j(0, 2.404825557695773), 0.0, 1e-10);
}

TEST(BesselJ, MatchesStdOracle) {
    double worst = 0.0;
    for (int k = 0; k <= 50; k += 1) {
        for (double x = 0.05; x <= 100.0; x *= 1.07) {
            const double ref = boost::math::cyl_bessel_j(k, x);
            const double got = bessel_j(k, x);
            // past the turning point, relative to the oscillation envelope
            const double env = x > k ? std::sqrt(2.0 / (std::numbers::pi * x)) : 0.0;
            if (std::abs(ref) < 1e-280) continue;
            worst = std::max(worst, std::abs(got - ref) / std::max(std::abs(ref), env));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(BesselJ, LargeArgumentAgainstBoost) {
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k)
        for (double x = 20.0; x < 2000.0; x *= 1.13)
            worst = std::max(worst, std::abs(bessel_j(k, x) - boost::math::cyl_bessel_j(k, x)));
    EXPECT_LT(worst, 1e-14);
}

TEST(BesselIK, SeriesValue) {
    // sum (1/2)^{2m+1} / (m! (m+1)!)
    long double sum = 0.0L, t = 0.5L;
    for (int m = 0; m < 30; ++m) {
        sum += t;
        t *= 0.25L / ((m + 1) * (long double)(m + 2));
    }
    EXPECT_NEAR(static_cast<double>(sum), 0.565159103992485, 1e-15);
    EXPECT_NEAR(bessel_i_scaled(1, 1.0).value(), 0.565159103992485, 1e-15);
    EXPECT_EQ(bessel_i_scaled(0, 0.0).value(), 1.0);
    EXPECT_EQ(bessel_i_scaled(3, 0.0).value(), 0.0);
}

TEST(BesselIK, Wronskian) {
    double worst = 0.0;
    for (double s : {0.1, 1.0, 10.0, 100.0}) {
        for (int k = 1; k <= 10; ++k) {
            const auto I = bessel_i_exp_seq(k, s);
            const auto K = bessel_k_exp_seq(k, s);
            worst = std::max(worst, std::abs(s * (K[k] * I[k - 1] + I[k] * K[k - 1]) - 1.0));
            // the SpecFunValue route
            const auto w = bessel_k_scaled(k, s) * bessel_i_scaled(k - 1, s);
            const auto v = bessel_i_scaled(k, s) * bessel_k_scaled(k - 1, s);
            worst = std::max(worst, std::abs(s * (w.value() + v.value()) - 1.0));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(BesselIK, AgainstBoost) {
    double wi = 0.0, wk = 0.0;
    for (int k = 0; k <= 10; ++k) {
        for (double s : log_grid(1e-3, 600.0, 80)) {
            const double ri = boost::math::cyl_bessel_i(k, s) * std::exp(-s);
            const double rk = boost::math::cyl_bessel_k(k, s) * std::exp(s);
            if (ri > 1e-290) wi = std::max(wi, std::abs(bessel_i_exp(k, s) / ri - 1.0));
            wk = std::max(wk, std::abs(bessel_k_exp(k, s) / rk - 1.0));
        }
    }
    EXPECT_LT(wi, 1e-12);
    EXPECT_LT(wk, 1e-12);
}

TEST(BesselIK, ScaledRangeBeyondOverflow) {
    // leading Hankel asymptotics, remainder O(s^-3)
    const double s = 1e4;
    const double ref_i = (1.0 + 1.0 / (8 * s) + 9.0 / (128 * s * s)) / std::sqrt(2 * std::numbers::pi * s);
    const double ref_k = std::sqrt(std::numbers::pi / (2 * s)) * (1.0 - 1.0 / (8 * s) + 9.0 / (128 * s * s));
    EXPECT_NEAR(bessel_i_exp(0, s) / ref_i, 1.0, 1e-11);
    EXPECT_NEAR(bessel_k_exp(0, s) / ref_k, 1.0, 1e-11);
    const auto big = bessel_i_scaled(2, 2000.0);
    EXPECT_TRUE(std::isinf(big.value()));
    EXPECT_NEAR(big.log_abs(), 2000.0 + std::log(bessel_i_exp(2, 2000.0)), 1e-9);
    // ratio I_k(xi r)/I_k(xi) in scaled space
    const double ratio = (bessel_i_scaled(3, 900.0) / bessel_i_scaled(3, 1000.0)).value();
    EXPECT_NEAR(std::log(ratio), -100.0 + std::log(bessel_i_exp(3, 900.0) / bessel_i_exp(3, 1000.0)), 1e-10);
}

TEST(BesselIK, RecurrenceInvariant) {
    double worst = 0.0;
    for (double s : log_grid(1e-3, 1e3, 60)) {
        const auto I = bessel_i_exp_seq(11, s);
        for (int k = 1; k <= 10; ++k) {
            const double lhs = I[k - 1] - I[k + 1];
            const double rhs = 2.0 * k / s * I[k];
            if (rhs < 1e-290) continue;
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(BesselIK, Domain) {
    EXPECT_THROW(bessel_k_scaled(0, 0.0), std::domain_error);
    EXPECT_THROW(bessel_k_exp_seq(2, 0.0), std::domain_error);
    EXPECT_THROW(bessel_i_scaled(-1, 1.0), std::domain_error);
}

TEST(SpecFunValue, Normalization) {
    for (double v : {1e-300, 3.0, -7.5e200, 0.5}) {
        auto s = SpecFunValue::make(v, 0.0);
        EXPECT_GE(std::abs(s.mantissa), std::exp(-1.0));
        EXPECT_LT(std::abs(s.mantissa), std::exp(1.0));
        EXPECT_NEAR(s.value() / v, 1.0, 1e-14);
    }
    EXPECT_EQ(SpecFunValue::make(0.0, 5.0).value(), 0.0);
}

TEST(StruveM, Domain) {
    EXPECT_THROW(struve_m(0, 0.0), std::domain_error);
    EXPECT_EQ(struve_m(2, 0.0), 0.0);
}

TEST(StruveM, SmallArgumentLimit) {
    EXPECT_NEAR(struve_m(1, 1e-6) / 1e-6, std::numbers::pi / 4, 1e-5);
    for (int k = 1; k <= 6; ++k) {
        const double lim = std::sqrt(std::numbers::pi) * std::tgamma(k + 0.5) / (2 * std::tgamma(k + 1.0));
        EXPECT_NEAR(struve_m_reduced(k, 1e-7), lim, 1e-6 * lim);
    }
}

TEST(StruveM, LargeArgumentRatio) {
    for (int k = 1; k <= 5; ++k)
        EXPECT_LE(std::abs(struve_m(k, 100.0) / std::pow(100.0, k - 1) - 1.0), 1e-3);
}

TEST(StruveM, AgainstSeriesOracle) {
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k) {
        for (double s : {0.05, 0.3, 1.0, 2.5, 5.0}) {
            const double c = std::pow(2.0, k - 1) * std::sqrt(std::numbers::pi) * std::tgamma(k + 0.5);
            const double ref = c * (boost::math::cyl_bessel_i(k, s) - struve_l_series(k, s));
            worst = std::max(worst, std::abs(struve_m(k, s) / ref - 1.0));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(StruveM, AgainstAdaptiveQuadrature) {
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
        for (double s : {0.01, 0.7, 13.0, 250.0, 4000.0}) {
            const double ref = std::pow(s, k) * integrate([&](double t) {
                return std::exp(-s * std::cos(t)) * std::pow(std::sin(t), 2 * k);
            }, 0.0, std::numbers::pi / 2, 1e-14);
            worst = std::max(worst, std::abs(struve_m(k, s) / ref - 1.0));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(StruveM, DifferentialIdentity) {
    const double h = 1e-4;
    for (int k = 1; k <= 3; ++k) {
        for (double s : {0.5, 5.0}) {
            const double d = (struve_m(k, s + h) - struve_m(k, s - h)) / (2 * h);
            const double dk = d + k / s * struve_m(k, s);
            EXPECT_NEAR(dk, (2 * k - 1) * struve_m(k - 1, s), 1e-8);
        }
    }
}

TEST(StruveM, BoundsAndMonotonicity) {
    const auto grid = log_grid(1e-3, 1e3, 200);
    for (int k = 0; k <= 6; ++k) {
        double prev_up = -1.0, prev_down = 1e300;
        for (double s : grid) {
            const double m = struve_m(k, s);
            EXPECT_GE(m, 0.0);
            if (k == 0) {
                EXPECT_LE(m, 2.0 / s);
                EXPECT_LE(m, prev_down * (1 + 1e-14));
                prev_down = m;
            } else {
                EXPECT_LE(m, std::pow(s, k - 1) * (1 + 1e-13));
                const double up = std::pow(s, k) * m;
                const double down = struve_m_reduced(k, s);
                EXPECT_GE(up, prev_up * (1 - 1e-14));
                EXPECT_LE(down, prev_down * (1 + 1e-14));
                prev_up = up;
                prev_down = down;
            }
        }
    }
}

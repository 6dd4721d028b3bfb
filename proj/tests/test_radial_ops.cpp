#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "radialfs/radial_ops.hpp"

using namespace radialfs;

namespace {

// sum_j c_j r^j e^{-a r^2}, exact action of D_nu
struct PolyGauss {
    std::map<int, double> c;
    double a = 1.0;

    PolyGauss apply(double nu) const {
        PolyGauss out{{}, a};
        for (auto [j, v] : c) {
            out.c[j - 1] += v * (j + nu);
            out.c[j + 1] += -2.0 * a * v;
        }
        return out;
    }
    PolyGauss apply(const BesselOpSpec& s) const {
        PolyGauss out = *this;
        for (auto it = s.indices.rbegin(); it != s.indices.rend(); ++it) out = out.apply(*it);
        return out;
    }
    double operator()(double r) const {
        double s = 0.0;
        for (auto [j, v] : c) s += v * std::pow(r, j);
        return s * std::exp(-a * r * r);
    }
};

ModeField sample(const PolyGauss& p, GridPtr g, int k) {
    return ModeField::sample_radial(k, g, [&](double r) { return p(r); });
}

GridPtr grid64() { return RadialGrid::gauss(64, 8.0); }

}  // namespace

TEST(RadialGrid, WeightsAndNodes) {
    for (double R : {1.0, 3.5, 40.0}) {
        auto g = RadialGrid::gauss(37, R);
        EXPECT_NEAR(g->weights().sum(), R * R / 2, 1e-12 * R * R);
        EXPECT_GT(g->nodes()[0], 0.0);
        EXPECT_LT(g->nodes()[36], R);
        for (int i = 1; i < 37; ++i) EXPECT_GT(g->nodes()[i], g->nodes()[i - 1]);
    }
    auto m = RadialGrid::mapped(96, 5.0);
    double s = 0.0;
    for (int i = 0; i < m->size(); ++i) s += m->weights()[i] * std::exp(-m->nodes()[i] * m->nodes()[i]);
    EXPECT_NEAR(s, 0.5, 1e-10);
}

TEST(RadialGrid, DifferentiationExactOnPolynomials) {
    const int n = 16;
    auto g = RadialGrid::gauss(n, 2.0);
    Eigen::VectorXd f = g->nodes().array().pow(n - 1);
    Eigen::VectorXd df = (n - 1) * g->nodes().array().pow(n - 2);
    Eigen::VectorXd got = g->diff() * f;
    EXPECT_LT((got - df).cwiseAbs().maxCoeff() / df.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(RadialGrid, InterpolationAndExtrapolation) {
    auto g = RadialGrid::gauss(20, 1.0);
    Eigen::VectorXd f = g->nodes().array().cube() - 2.0 * g->nodes().array();
    EXPECT_NEAR(g->interp_row(0.0).dot(f), 0.0, 1e-12);
    EXPECT_NEAR(g->interp_row(1.0).dot(f), -1.0, 1e-12);
    EXPECT_NEAR(g->interp_row(0.3).dot(f), 0.027 - 0.6, 1e-13);
}

TEST(BesselOpSpec, MixedExpansion) {
    // D^{2}_{-3+1} D^1_3 = D_{1} D_{2}... written out: D^{n-i}_{-k+i} D^i_k with k=3,n=3,i=1
    auto s = BesselOpSpec::mixed(3, 3, 1);
    ASSERT_EQ(s.indices.size(), 3u);
    EXPECT_EQ(s.indices[0], -3.0);
    EXPECT_EQ(s.indices[1], -2.0);
    EXPECT_EQ(s.indices[2], 3.0);
    EXPECT_EQ(s.resulting_mode(3), 4);
    auto p = BesselOpSpec::power(2.5, 3);
    EXPECT_EQ(p.indices, (std::vector<double>{0.5, 1.5, 2.5}));
}

TEST(ApplyBesselOp, PowerRule) {
    auto g = grid64();
    auto f = ModeField::sample_radial(3, g, [](double r) { return r * r * r; });
    auto d = apply_bessel_op(BesselOpSpec::power(2, 1), f);
    auto ref = ModeField::sample_radial(2, g, [](double r) { return 5 * r * r; });
    EXPECT_LT(relative_residual(d, ref), 1e-10);
    for (int mu : {1, 2, 3}) {
        auto h = ModeField::sample_radial(mu, g, [mu](double r) { return std::pow(r, mu); });
        auto z = apply_bessel_op(BesselOpSpec::power(-mu, 1), h);
        EXPECT_LT(z.values.cwiseAbs().maxCoeff(), 1e-10);
    }
    auto one = ModeField::sample_radial(0, g, [](double) { return 1.0; });
    EXPECT_LT(apply_bessel_op(BesselOpSpec::power(0, 1), one).values.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ApplyBesselOp, ModeBookkeeping) {
    auto g = grid64();
    for (int k : {-3, -1, 1, 2, 5}) {
        auto f = ModeField::sample_radial(k, g, [k](double r) { return std::pow(r, std::abs(k)) * std::exp(-r * r); });
        auto a = apply_bessel_op(BesselOpSpec::power(k, 1), f);
        EXPECT_EQ(a.k, k - 1);
        auto b = apply_bessel_op(BesselOpSpec::power(-(k - 1), 1), a);
        EXPECT_EQ(b.k, k);
    }
    for (int k = 0; k <= 3; ++k)
        for (int n = 0; n <= 3; ++n)
            for (int i = 0; i <= n; ++i) EXPECT_EQ(BesselOpSpec::mixed(k, n, i).resulting_mode(k), k + n - 2 * i);
}

TEST(Commutation, SpecExamples) {
    auto g = grid64();
    PolyGauss f1{{{2, 1.0}}, 1.0};
    EXPECT_LT(check_commutation(1, 2, 1, 1, sample(f1, g, 2)), 1e-8);
    PolyGauss f2{{{0, 1.0}}, 1.0};
    EXPECT_EQ(check_commutation(0.37, 1.0, 0, 2, sample(f2, g, 0)), 0.0);
    EXPECT_LT(check_commutation(0, 0, 2, 1, sample(f2, g, 0)), 1e-8);
}

TEST(Commutation, AgainstSymbolicOracle) {
    auto g = grid64();
    // vanishing to sixth order at r = 0 keeps every intermediate smooth
    PolyGauss f{{{6, 1.0}, {8, -0.3}}, 1.0};
    const auto F = sample(f, g, 6);
    double worst = 0.0;
    for (int nu = -2; nu <= 2; ++nu)
        for (int mu = -2; mu <= 2; ++mu)
            for (int n = 0; n <= 3; ++n)
                for (int m = 0; m <= 3; ++m) {
                    worst = std::max(worst, check_commutation(nu, mu, n, m, F));
                    // six nested spectral derivatives on 64 nodes are beyond 1e-8
                    if (n + m > 4) continue;
                    auto spec = BesselOpSpec::compose(BesselOpSpec::power(nu, n), BesselOpSpec::power(mu, m));
                    auto num = apply_bessel_op(spec, F);
                    auto ref = sample(f.apply(spec), g, num.k);
                    worst = std::max(worst, relative_residual(num, ref));
                }
    EXPECT_LT(worst, 1e-8);
}

TEST(OperatorRules, ShiftProductLaplacian) {
    auto g = grid64();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    double worst_shift = 0.0, worst_prod = 0.0, worst_lap = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        PolyGauss f{{{4, U(rng)}, {5, U(rng)}, {6, U(rng)}}, 1.0 + 0.3 * U(rng)};
        PolyGauss h{{{0, U(rng)}, {2, U(rng)}}, 0.8};
        const auto F = sample(f, g, 0), H = sample(h, g, 0);
        for (int mu = -2; mu <= 2; ++mu) {
            for (int nu = -2; nu <= 2; ++nu) {
                auto rnu = ModeField::sample_radial(0, g, [nu](double r) { return std::pow(r, nu); });
                auto lhs = apply_bessel_op(BesselOpSpec::power(mu, 1), pointwise(rnu, F));
                auto rhs = pointwise(rnu, apply_bessel_op(BesselOpSpec::power(mu + nu, 1), F));
                worst_shift = std::max(worst_shift, l21_norm(lhs - rhs) / l21_norm(F));
                auto plhs = apply_bessel_op(BesselOpSpec::power(mu + nu, 1), pointwise(F, H));
                auto prhs = pointwise(apply_bessel_op(BesselOpSpec::power(mu, 1), F), H) +
                            pointwise(F, apply_bessel_op(BesselOpSpec::power(nu, 1), H));
                worst_prod = std::max(worst_prod, relative_residual(plhs, prhs));
            }
        }
        for (int k = 0; k <= 4; ++k) {
            auto a = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(1 - k, 1), BesselOpSpec::power(k, 1)), F);
            auto b = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(1 + k, 1), BesselOpSpec::power(-k, 1)), F);
            worst_lap = std::max(worst_lap, l21_norm(a - b) / l21_norm(F));
        }
    }
    EXPECT_LT(worst_shift, 1e-9);
    EXPECT_LT(worst_prod, 1e-9);
    EXPECT_LT(worst_lap, 1e-9);
}

TEST(ProjectMode, Examples) {
    auto g = RadialGrid::gauss(32, 4.0);
    auto p = project_mode([](double x, double, double) { return cplx(x, 0); }, 1, g);
    auto ref = ModeField::sample_radial(1, g, [](double r) { return r / 2; });
    EXPECT_LT(relative_residual(p, ref), 1e-12);
    auto z = project_mode([](double x, double y, double) { return cplx(std::exp(-x * x - y * y), 0); }, 1, g);
    EXPECT_LT(z.values.cwiseAbs().maxCoeff(), 1e-14);
    // D_0 P_0[psi] = P_{-1}[sqrt2 d_zeta psi]
    auto psi = [](double x, double y, double) { return cplx(std::exp(-x * x - y * y), 0); };
    auto dzeta = [](double x, double y, double) {
        const double e = std::exp(-x * x - y * y);
        return cplx(-2 * x * e, 2 * y * e);  // psi_x - i psi_y
    };
    auto lhs = apply_bessel_op(BesselOpSpec::power(0, 1), project_mode(psi, 0, g));
    auto rhs = project_mode(dzeta, -1, g);
    EXPECT_LT(relative_residual(lhs, rhs), 1e-8);
    EXPECT_THROW(project_mode(psi, 10, g, std::nullopt, 20), std::invalid_argument);
}

TEST(Leibniz, Examples) {
    auto g = grid64();
    auto f = ModeField::sample_radial(1, g, [](double r) { return r * std::exp(-r * r); });
    EXPECT_LT(leibniz_product(f, f, 1, 0, 1), 1e-8);
    EXPECT_EQ(leibniz_product(f, f, 0, 0, 0), 0.0);
    auto g1 = RadialGrid::gauss(24, 1.0);
    auto a = ModeField::sample_radial(2, g1, [](double r) { return r * r; });
    auto b = ModeField::sample_radial(3, g1, [](double r) { return r * r * r; });
    EXPECT_LT(leibniz_product(a, b, 2, 1, 2), 1e-9);
}

TEST(Leibniz, AllIndicesWithAxial) {
    auto g = RadialGrid::gauss(64, 7.0);
    AxialGrid ax{8.0, 64};
    auto f = ModeField::sample(1, g, ax, [](double r, double z) { return cplx(r * std::exp(-r * r - z * z), 0); });
    auto h = ModeField::sample(2, g, ax, [](double r, double z) { return cplx(r * r * std::exp(-r * r - 0.5 * z * z), 0.3 * r * r); });
    double worst = 0.0;
    for (int p = 0; p <= 4; ++p)
        for (int n = 0; n <= std::min(p, 3); ++n)
            for (int i = 0; i <= n; ++i) {
                if (p - n > 2) continue;
                worst = std::max(worst, leibniz_product(f, h, n, i, p));
            }
    EXPECT_LT(worst, 1e-8);
}

TEST(FaaDiBruno, Examples) {
    auto g = RadialGrid::gauss(64, 6.0);
    auto f1 = ModeField::sample_radial(1, g, [](double r) { return r * std::exp(-r * r); });
    AnalyticMap ident = [](int order, cplx w) { return order == 0 ? w : (order == 1 ? cplx(1) : cplx(0)); };
    AnalyticMap square = [](int order, cplx w) { return order == 0 ? w * w : (order == 1 ? 2.0 * w : (order == 2 ? cplx(2) : cplx(0))); };
    AnalyticMap expo = [](int, cplx w) { return std::exp(w); };
    for (int p = 0; p <= 2; ++p) {
        EXPECT_LT(compose_faadibruno(ident, f1, 1, p), 1e-10);
        EXPECT_LT(compose_faadibruno(ident, f1, 3, p), 1e-10);
    }
    EXPECT_LT(compose_faadibruno(square, f1, 2, 1), 1e-7);
    EXPECT_LT(compose_faadibruno(square, f1, 2, 2), 1e-7);
    AxialGrid ax{8.0, 128};
    auto f0 = ModeField::sample(0, g, ax, [](double r, double z) { return cplx(std::exp(-r * r - z * z), 0); });
    EXPECT_LT(compose_faadibruno(expo, f0, 0, 2), 1e-6);
    auto f2 = ModeField::sample(1, g, ax, [](double r, double z) { return cplx(r * std::exp(-r * r - z * z), 0); });
    EXPECT_LT(compose_faadibruno(expo, f2, 1, 2), 1e-6);
}

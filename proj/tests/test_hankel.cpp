#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "radialfs/hankel.hpp"
#include "radialfs/quadrature.hpp"
#include "radialfs/spaces.hpp"

using namespace radialfs;

namespace {

constexpr double pi = std::numbers::pi;

// H_k[f](rho) by adaptive quadrature with an independent Bessel implementation
double hankel_oracle(int k, const std::function<double(double)>& f, double rho) {
    return integrate([&](double r) { return f(r) * boost::math::cyl_bessel_j(k, rho * r) * r; }, 0.0, 40.0, 1e-13);
}

double rel_to_exact(const ModeField& h, const std::function<double(double)>& exact) {
    ModeField e = ModeField::sample_radial(h.k, h.grid, exact);
    return l21_norm(h - e) / l21_norm(e);
}

PlanPtr big(int k) {
    static std::map<int, PlanPtr> plans;
    auto& p = plans[k];
    if (!p) p = HankelPlan::create(k);
    return p;
}

PlanPtr small(int k) { return HankelPlan::create(k, 128, 16.0); }

}  // namespace

TEST(HankelTransform, SelfReciprocalGaussian) {
    auto p = big(0);
    auto f = ModeField::sample_radial(0, p->r_grid(), [](double r) { return std::exp(-r * r / 2); });
    const auto h = hankel_transform(*p, f);
    EXPECT_LE(rel_to_exact(h, [](double q) { return std::exp(-q * q / 2); }), 1e-6);
    // the closed form itself against quadrature of the defining integral at 20 rho values
    for (int j = 0; j < 20; ++j) {
        const double rho = 0.25 + 0.4 * j;
        const double ref = hankel_oracle(0, [](double r) { return std::exp(-r * r / 2); }, rho);
        EXPECT_NEAR(ref, std::exp(-rho * rho / 2), 1e-12);
        const cplx got = (p->rho_grid()->interp_row(rho) * h.values)(0);
        EXPECT_NEAR(got.real(), ref, 1e-10);
    }
}

TEST(HankelTransform, ModeOneGaussian) {
    auto p = big(1);
    auto f = ModeField::sample_radial(1, p->r_grid(), [](double r) { return r * std::exp(-r * r / 2); });
    const auto h = hankel_transform(*p, f);
    EXPECT_LE(rel_to_exact(h, [](double q) { return q * std::exp(-q * q / 2); }), 1e-6);
    for (double rho : {0.3, 1.1, 2.7, 4.0}) {
        const double ref = hankel_oracle(1, [](double r) { return r * std::exp(-r * r / 2); }, rho);
        EXPECT_NEAR(ref, rho * std::exp(-rho * rho / 2), 1e-12);
    }
}

TEST(HankelTransform, InvolutionAndParseval) {
    for (int k = 0; k <= 5; ++k) {
        const auto v = big(k)->validate();
        EXPECT_LE(v.round_trip, 1e-6) << "k=" << k;
        EXPECT_LE(v.parseval, 1e-8) << "k=" << k;
        EXPECT_TRUE(v.pass);
        auto f = ModeField::sample_radial(k, big(k)->r_grid(), [k](double r) {
            return std::pow(r, k) * (1 - 0.2 * r * r) * std::exp(-0.7 * r * r);
        });
        const auto back = hankel_transform(*big(k), hankel_transform(*big(k), f));
        EXPECT_LE(relative_residual(back, f), 1e-6);
    }
}

TEST(HankelTransform, NegativeModesAndAxialSlices) {
    auto p = big(1);
    auto f = ModeField::sample_radial(-1, p->r_grid(), [](double r) { return r * std::exp(-r * r); });
    auto fp = f.like(f.values, 1);
    EXPECT_LE(l21_norm(hankel_transform(*p, f) + hankel_transform(*p, fp)), 1e-14);
    AxialGrid ax{4.0, 8};
    auto g = ModeField::sample(1, p->r_grid(), ax, [](double r, double z) {
        return cplx(r * std::exp(-r * r) * std::cos(z), 0.0);
    });
    const auto hg = hankel_transform(*p, g);
    const auto h1 = hankel_transform(*p, ModeField::sample_radial(1, p->r_grid(), [](double r) {
        return r * std::exp(-r * r);
    }));
    for (int j = 0; j < ax.N; ++j)
        EXPECT_LE((hg.values.col(j) - h1.values.col(0) * std::cos(ax.z(j))).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_THROW(hankel_transform(*big(2), fp), std::invalid_argument);
}

TEST(HankelPlan, KernelSymmetry) {
    auto p = small(2);
    const Eigen::MatrixXd S = p->kernel() * p->r_grid()->weights().cwiseInverse().asDiagonal();
    EXPECT_LE((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HankelPlan, CacheRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "radialfs_cache_test";
    std::filesystem::remove_all(dir);
    setenv("RADIALFS_CACHE", dir.c_str(), 1);
    auto a = HankelPlan::create(3, 64, 12.0);
    ASSERT_FALSE(std::filesystem::is_empty(dir));
    auto b = HankelPlan::create(3, 64, 12.0);
    EXPECT_EQ((a->kernel() - b->kernel()).cwiseAbs().maxCoeff(), 0.0);
    // header magic
    const auto file = *std::filesystem::directory_iterator(dir);
    std::ifstream in(file.path(), std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "HNKL");
    in.close();
    // a configuration mismatch is not served from the file
    EXPECT_EQ(HankelPlan::load(file.path().string(), 2, RadialGrid::gauss(64, 12.0)), nullptr);
    // a truncated file is ignored and rebuilt
    std::filesystem::resize_file(file.path(), 100);
    auto c = HankelPlan::create(3, 64, 12.0);
    EXPECT_EQ((a->kernel() - c->kernel()).cwiseAbs().maxCoeff(), 0.0);
    unsetenv("RADIALFS_CACHE");
    std::filesystem::remove_all(dir);
}

TEST(SymbolIdentity, ForwardAndDual) {
    EXPECT_EQ(symbol_identity_residual(*small(0), ModeField::sample_radial(0, small(0)->r_grid(), [](double r) {
        return std::exp(-r * r);
    }), 0, 0), 0.0);
    for (int k : {0, 1, 2, 3}) {
        auto p = small(k);
        auto f = ModeField::sample_radial(k, p->r_grid(), [k](double r) {
            return std::pow(r, k) * (1 + 0.3 * r * r) * std::exp(-r * r);
        });
        for (int n = 1; n <= 3; ++n)
            for (int i = 0; i <= n; ++i) {
                EXPECT_LE(symbol_identity_residual(*p, f, n, i), 1e-6) << k << n << i;
                EXPECT_LE(dual_symbol_identity_residual(*p, f, n, i), 1e-6) << k << n << i;
            }
    }
}

TEST(HankelSpaceNorm, AgainstSobolevNorms) {
    auto p = small(0);
    auto f = ModeField::sample_radial(0, p->r_grid(), [](double r) { return std::exp(-r * r); });
    EXPECT_NEAR(hankel_space_norm(*p, f, 0.0) / l21_norm(f), 1.0, 1e-8);
    const double n1 = hankel_space_norm(*p, f, 1.0), n15 = hankel_space_norm(*p, f, 1.5),
                 n2 = hankel_space_norm(*p, f, 2.0);
    EXPECT_LT(n1, n15);
    EXPECT_LT(n15, n2);
    // (1 + rho^2) is the m = 1 symbol exactly
    EXPECT_NEAR(n1 / sobolev_norm(f, 1).total, 1.0, 1e-5);
    for (int k : {0, 1, 3}) {
        auto pk = small(k);
        auto g = ModeField::sample_radial(k, pk->r_grid(), [k](double r) { return std::pow(r, k) * std::exp(-r * r); });
        for (int m : {1, 2}) {
            const double hm = sobolev_norm(g, m).total;
            EXPECT_NEAR(hankel_symbol_norm(*pk, g, m) / hm, 1.0, 1e-5) << k << m;
            // 1 + rho^2 + rho^4 <= (1 + rho^2)^2 <= 2 (1 + rho^2 + rho^4)
            const double bm = hankel_space_norm(*pk, g, m);
            EXPECT_GE(bm, hm * (1 - 1e-8));
            EXPECT_LE(bm, std::sqrt(2.0) * hm * (1 + 1e-8));
        }
    }
}

TEST(TriangleKernel, ValuesAndSymmetry) {
    EXPECT_EQ(triangle_kernel(3, 1, 1), 0.0);
    EXPECT_THROW(triangle_kernel(0, 1, 1), std::domain_error);
    EXPECT_THROW(triangle_kernel(1, -1, 1), std::domain_error);
    // equilateral unit triangle: area sqrt(3)/4
    EXPECT_NEAR(triangle_kernel(1, 1, 1), 1.0 / (2 * pi * std::sqrt(3.0) / 4), 1e-14);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.1, 4.0);
    for (int t = 0; t < 50; ++t) {
        const double a = U(rng), b = U(rng), c = U(rng);
        const double d = triangle_kernel(a, b, c);
        for (double e : {triangle_kernel(a, c, b), triangle_kernel(b, a, c), triangle_kernel(b, c, a),
                         triangle_kernel(c, a, b), triangle_kernel(c, b, a)})
            EXPECT_NEAR(e, d, 1e-12 * (1 + d));
        EXPECT_EQ(d > 0.0, std::abs(a - c) < b && b < a + c);
    }
}

TEST(TriangleKernel, UnitIntegrals) {
    boost::math::quadrature::tanh_sinh<double> ts;
    double worst = 0.0, worst_ts = 0.0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const double rho = 0.1 + a * 4.9 / 9, w = 0.1 + b * 4.9 / 9;
            worst = std::max(worst, std::abs(triangle_integral(rho, w, [](double) { return 1.0; }) - 1.0));
            // independent: endpoint-singular integral in u directly
            const double lo = std::abs(rho - w), hi = rho + w;
            const double v = ts.integrate([&](double u) {
                return u > lo && u < hi ? triangle_kernel(rho, u, w) * u : 0.0;
            }, lo, hi);
            worst_ts = std::max(worst_ts, std::abs(v - 1.0));
        }
    EXPECT_LE(worst, 1e-12);
    EXPECT_LE(worst_ts, 1e-6);
}

TEST(TriangleKernel, ProductIdentity) {
    auto p = small(0);
    auto f = ModeField::sample_radial(0, p->r_grid(), [](double r) { return std::exp(-r * r / 2); });
    // direct side: H_0[e^{-r^2}] = e^{-rho^2/4}/2
    const auto hfg = hankel_transform(*p, pointwise(f, f));
    EXPECT_LE(rel_to_exact(hfg, [](double q) { return 0.5 * std::exp(-q * q / 4); }), 1e-8);
    EXPECT_NEAR(hankel_oracle(0, [](double r) { return std::exp(-r * r); }, 1.3), 0.5 * std::exp(-1.69 / 4), 1e-12);
    EXPECT_LE(product_identity_residual(*p, *p, f, f), 1e-4);

    auto p1 = small(1);
    auto g = ModeField::sample_radial(1, p1->r_grid(), [](double r) { return r * std::exp(-r * r / 2); });
    EXPECT_LE(product_identity_residual(*p1, *p, g, f), 1e-4);
    EXPECT_LE(product_identity_residual(*p1, *p1, g, g), 1e-4);
}

TEST(HankelSpaces, AlgebraAndEmbedding) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), width(0.5, 2.0);
    auto grid_plan = [&](int k) { return small(k); };
    auto random_field = [&](int k) {
        const double a = width(rng), c0 = coef(rng), c1 = coef(rng);
        return ModeField::sample_radial(k, grid_plan(k)->r_grid(), [=](double r) {
            return std::pow(r, k) * (c0 + c1 * r * r) * std::exp(-a * r * r);
        });
    };
    std::vector<double> alg, emb;
    for (int s = 0; s < 20; ++s) {
        const int k = s % 2, l = (s / 2) % 2;
        const auto f = random_field(k), g = random_field(l);
        const double nf = hankel_space_norm(*small(k), f, 1.0), ng = hankel_space_norm(*small(l), g, 1.0);
        alg.push_back(hankel_space_norm(*small(k + l), pointwise(f, g), 1.0) / (nf * ng));
        emb.push_back(bounded_norm(f, 0) / hankel_space_norm(*small(k), f, 1.5));
    }
    const double C = *std::max_element(alg.begin(), alg.begin() + 10);
    const double Ce = *std::max_element(emb.begin(), emb.begin() + 10);
    for (double v : alg) EXPECT_LE(v, 4 * C);
    for (double v : emb) EXPECT_LE(v, 4 * Ce);
    EXPECT_LT(C, 10.0);
    EXPECT_LT(Ce, 10.0);
}

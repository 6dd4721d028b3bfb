#include "radialfs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>

#include "radialfs/bounds.hpp"
#include "radialfs/cyl_poisson.hpp"
#include "radialfs/greens.hpp"
#include "radialfs/hankel.hpp"
#include "radialfs/quadrature.hpp"
#include "radialfs/radial_ops.hpp"
#include "radialfs/spaces.hpp"
#include "radialfs/specfun.hpp"

namespace radialfs {

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json residual = std::isfinite(c.max_residual) ? nlohmann::json(c.max_residual) : nlohmann::json(nullptr);
        arr.push_back({{"name", c.name}, {"max_residual", residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    return {{"suite", suite}, {"checks", arr}, {"pass", pass()}};
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

CheckResult check(std::string name, double residual, double tol) {
    // NaN fails
    return {std::move(name), residual, tol, residual <= tol};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = lo * std::pow(hi / lo, double(j) / (n - 1));
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ---------------------------------------------------------------- specfun

CheckResult bessel_i_recurrence() {
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k)
        for (double s : log_grid(1e-3, 1e3, 121)) {
            const SpecFunValue lo = bessel_i_scaled(k - 1, s), mid = bessel_i_scaled(k, s), hi = bessel_i_scaled(k + 1, s);
            const double shift = mid.log_scale;
            const double rhs = 2.0 * k / s * mid.scaled(shift);
            worst = std::max(worst, rel(lo.scaled(shift) - hi.scaled(shift), rhs));
        }
    return check("bessel_i_recurrence", worst, 1e-10);
}

// sum c_m J_m(r) over m >= 0; D_nu is applied through
//   D_nu J_m = J_{m-1} + (nu - m) J_m / r,   J_m / r = (J_{m-1} + J_{m+1}) / (2m)
using JSeries = std::map<int, double>;

void add_j(JSeries& s, int m, double c) {
    if (m < 0) {
        if (m % 2 != 0) c = -c;
        m = -m;
    }
    s[m] += c;
}

std::optional<JSeries> apply_d(const JSeries& in, int nu) {
    JSeries out;
    for (auto [m, c] : in) {
        if (c == 0.0) continue;
        add_j(out, m - 1, c);
        const int a = nu - m;
        if (a == 0) continue;
        if (m == 0) return std::nullopt;  // J_0 / r is singular
        add_j(out, m - 1, c * a / (2.0 * m));
        add_j(out, m + 1, c * a / (2.0 * m));
    }
    return out;
}

CheckResult bessel_j_d_identity() {
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k)
        for (int n = 0; n <= 4; ++n)
            for (int i = 0; i <= n; ++i) {
                const auto spec = BesselOpSpec::mixed(k, n, i);
                std::optional<JSeries> s = JSeries{{k, 1.0}};
                for (auto it = spec.indices.rbegin(); s && it != spec.indices.rend(); ++it)
                    s = apply_d(*s, static_cast<int>(*it));
                if (!s) return check("bessel_j_d_identity", inf, 1e-10);
                const double sign = (n - i) % 2 == 0 ? 1.0 : -1.0;
                for (int j = 0; j <= 1000; ++j) {
                    const double r = 0.05 * j;
                    double v = 0.0;
                    for (auto [m, c] : *s) v += c * bessel_j(m, r);
                    worst = std::max(worst, std::abs(v - sign * bessel_j_signed(k + n - 2 * i, r)));
                }
            }
    return check("bessel_j_d_identity", worst, 1e-10);
}

CheckResult struve_m_bounds() {
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k)
        for (double s : log_grid(1e-3, 1e3, 200)) {
            const double m = struve_m(k, s);
            const double bound = k == 0 ? 2.0 / s : std::pow(s, k - 1);
            worst = std::max({worst, -m / bound, (m - bound) / bound});
        }
    return check("struve_m_bounds", worst, 1e-12);
}

CheckResult struve_m_monotonicity() {
    double worst = 0.0;
    const auto grid = log_grid(1e-3, 1e3, 200);
    for (int k = 0; k <= 5; ++k) {
        double prev_up = 0.0, prev_down = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double s = grid[j];
            // k = 0: M_0 itself is the decreasing one
            const double up = k == 0 ? 0.0 : std::pow(s, 2 * k) * struve_m_reduced(k, s);
            const double down = k == 0 ? struve_m(0, s) : struve_m_reduced(k, s);
            if (j > 0) {
                if (k > 0) worst = std::max(worst, (prev_up - up) / prev_up);
                worst = std::max(worst, (down - prev_down) / prev_down);
            }
            prev_up = up;
            prev_down = down;
        }
    }
    return check("struve_m_monotonicity", worst, 1e-12);
}

CheckResult struve_m_asymptotic_ratio() {
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k) worst = std::max(worst, std::abs(struve_m(k, 100.0) / std::pow(100.0, k - 1) - 1.0));
    return check("struve_m_asymptotic_ratio", worst, 1e-3);
}

CheckResult specfun_value_normalization() {
    double worst = 0.0;
    auto visit = [&](const SpecFunValue& v) {
        if (!std::isfinite(v.mantissa) || !std::isfinite(v.log_scale)) {
            worst = inf;
            return;
        }
        if (v.mantissa == 0.0) return;
        const double a = std::abs(v.mantissa);
        if (a < std::exp(-1.0) || a >= std::exp(1.0)) worst += 1.0;
    };
    for (int k = 0; k <= 10; ++k)
        for (double s : log_grid(1e-3, 1e3, 61)) {
            visit(bessel_i_scaled(k, s));
            visit(bessel_k_scaled(k, s));
        }
    return check("specfun_value_normalization", worst, 0.0);
}

SuiteReport specfun_suite() {
    return {"specfun",
            {bessel_i_recurrence(), bessel_j_d_identity(), struve_m_bounds(), struve_m_monotonicity(),
             struve_m_asymptotic_ratio(), specfun_value_normalization()}};
}

// ---------------------------------------------------------------- ops

CheckResult grid_weights() {
    double worst = 0.0;
    for (int n : {8, 37, 64, 128})
        for (double R : {1.0, 3.5, 40.0}) {
            const auto g = RadialGrid::gauss(n, R);
            worst = std::max(worst, rel(g->weights().sum(), R * R / 2));
            const auto& r = g->nodes();
            if (!(r[0] > 0.0 && r[n - 1] < R)) worst = inf;
            for (int j = 1; j < n; ++j)
                if (!(r[j] > r[j - 1])) worst = inf;
            if ((g->weights().array() <= 0.0).any()) worst = inf;
        }
    return check("grid_weights", worst, 1e-12);
}

CheckResult grid_differentiation() {
    double worst = 0.0;
    for (int n : {8, 16, 24})
        for (double R : {1.0, 2.0}) {
            const auto g = RadialGrid::gauss(n, R);
            for (int d = 0; d < n; ++d) {
                const Eigen::VectorXd f = (g->nodes().array() / R).pow(d);
                Eigen::VectorXd df = Eigen::VectorXd::Zero(n);
                if (d > 0) df = d / R * (g->nodes().array() / R).pow(d - 1);
                const Eigen::VectorXd got = g->diff() * f;
                worst = std::max(worst, (got - df).cwiseAbs().maxCoeff() / std::max(1.0, df.cwiseAbs().maxCoeff()));
            }
        }
    return check("grid_differentiation", worst, 1e-10);
}

CheckResult mode_vanishing_at_axis() {
    double worst = 0.0;
    const auto g = RadialGrid::gauss(48, 4.0);
    for (int k : {-3, -1, 1, 2, 5}) {
        const auto f = ModeField::sample_radial(k, g, [k](double r) { return std::pow(r, std::abs(k)) * std::exp(-r * r); });
        worst = std::max(worst, std::abs((f.grid->interp_row(0.0) * f.values)(0)));
    }
    return check("mode_vanishing_at_axis", worst, 1e-10);
}

CheckResult mixed_expansion() {
    double mismatches = 0.0;
    for (int k = -3; k <= 3; ++k)
        for (int n = 0; n <= 4; ++n)
            for (int i = 0; i <= n; ++i) {
                const auto spec = BesselOpSpec::mixed(k, n, i);
                // outer D^{n-i}_{-k+i}, then inner D^i_k
                std::vector<double> expect;
                for (int j = n - i - 1; j >= 0; --j) expect.push_back(-k + i - j);
                for (int j = i - 1; j >= 0; --j) expect.push_back(k - j);
                if (spec.indices != expect) mismatches += 1;
                if (spec.resulting_mode(k) != k + n - 2 * i) mismatches += 1;
                auto outer = BesselOpSpec::power(-k + i, n - i), inner = BesselOpSpec::power(k, i);
                if (BesselOpSpec::compose(outer, inner).indices != spec.indices) mismatches += 1;
            }
    return check("mixed_expansion", mismatches, 0.0);
}

// sum_j c_j r^j e^{-a r^2}, with the exact action of D_nu
struct PolyGauss {
    std::map<int, double> c;
    double a = 1.0;
    PolyGauss apply(const BesselOpSpec& s) const {
        PolyGauss cur = *this;
        for (auto it = s.indices.rbegin(); it != s.indices.rend(); ++it) {
            PolyGauss out{{}, a};
            for (auto [j, v] : cur.c) {
                out.c[j - 1] += v * (j + *it);
                out.c[j + 1] += -2.0 * a * v;
            }
            cur = out;
        }
        return cur;
    }
    double operator()(double r) const {
        double s = 0.0;
        for (auto [j, v] : c) s += v * std::pow(r, j);
        return s * std::exp(-a * r * r);
    }
};

ModeField sample(const PolyGauss& p, const GridPtr& g, int k) {
    return ModeField::sample_radial(k, g, [&](double r) { return p(r); });
}

ModeField power_field(const GridPtr& g, double nu) {
    return ModeField::sample_radial(0, g, [nu](double r) { return std::pow(r, nu); });
}

CheckResult commutation() {
    const auto g = RadialGrid::gauss(64, 8.0);
    // vanishing to sixth order at r = 0 keeps every intermediate smooth
    const PolyGauss f{{{6, 1.0}, {8, -0.3}}, 1.0};
    const auto F = sample(f, g, 6);
    double worst = 0.0;
    for (int nu = -2; nu <= 2; ++nu)
        for (int mu = -2; mu <= 2; ++mu)
            for (int n = 0; n <= 3; ++n)
                for (int m = 0; m <= 3; ++m) {
                    worst = std::max(worst, check_commutation(nu, mu, n, m, F));
                    // each side against the exact action; six nested spectral derivatives
                    // on 64 nodes are beyond the tolerance, so stop at four
                    if (n + m > 4) continue;
                    for (const auto& spec : {BesselOpSpec::compose(BesselOpSpec::power(nu, n), BesselOpSpec::power(mu, m)),
                                             BesselOpSpec::compose(BesselOpSpec::power(mu + n, m), BesselOpSpec::power(nu - m, n))}) {
                        const auto num = apply_bessel_op(spec, F);
                        worst = std::max(worst, relative_residual(num, sample(f.apply(spec), g, num.k)));
                    }
                }
    return check("commutation", worst, 1e-8);
}

std::vector<ModeField> random_smooth(const GridPtr& g, unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<ModeField> out;
    for (int t = 0; t < count; ++t)
        out.push_back(sample(PolyGauss{{{4, U(rng)}, {5, U(rng)}, {6, U(rng)}}, 1.0 + 0.3 * U(rng)}, g, 0));
    return out;
}

CheckResult shift_rule() {
    const auto g = RadialGrid::gauss(64, 8.0);
    double worst = 0.0;
    for (const auto& F : random_smooth(g, 7, 5))
        for (int mu = -2; mu <= 2; ++mu)
            for (int nu = -2; nu <= 2; ++nu) {
                const auto rnu = power_field(g, nu);
                const auto lhs = apply_bessel_op(BesselOpSpec::power(mu, 1), pointwise(rnu, F));
                const auto rhs = pointwise(rnu, apply_bessel_op(BesselOpSpec::power(mu + nu, 1), F));
                worst = std::max(worst, l21_norm(lhs - rhs) / l21_norm(F));
            }
    return check("shift_rule", worst, 1e-9);
}

CheckResult constant_rule() {
    const auto g = RadialGrid::gauss(64, 8.0);
    double worst = 0.0;
    // negative powers are not representable by the node polynomial
    for (int mu = 0; mu <= 3; ++mu) {
        const auto h = power_field(g, mu);
        worst = std::max(worst, l21_norm(apply_bessel_op(BesselOpSpec::power(-mu, 1), h)) / l21_norm(h));
    }
    return check("constant_rule", worst, 1e-9);
}

CheckResult product_rule() {
    const auto g = RadialGrid::gauss(64, 8.0);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> U(-1, 1);
    double worst = 0.0;
    for (const auto& F : random_smooth(g, 11, 5)) {
        const auto H = sample(PolyGauss{{{0, U(rng)}, {2, U(rng)}}, 0.8}, g, 0);
        for (int mu = -2; mu <= 2; ++mu)
            for (int nu = -2; nu <= 2; ++nu) {
                const auto lhs = apply_bessel_op(BesselOpSpec::power(mu + nu, 1), pointwise(F, H));
                const auto rhs = pointwise(apply_bessel_op(BesselOpSpec::power(mu, 1), F), H) +
                                 pointwise(F, apply_bessel_op(BesselOpSpec::power(nu, 1), H));
                worst = std::max(worst, relative_residual(lhs, rhs));
            }
    }
    return check("product_rule", worst, 1e-9);
}

CheckResult leibniz_rule() {
    const auto g = RadialGrid::gauss(64, 7.0);
    const AxialGrid ax{8.0, 64};
    const auto f = ModeField::sample(1, g, ax, [](double r, double z) { return cplx(r * std::exp(-r * r - z * z), 0); });
    const auto h = ModeField::sample(2, g, ax, [](double r, double z) {
        return cplx(r * r * std::exp(-r * r - 0.5 * z * z), 0.3 * r * r);
    });
    double worst = 0.0;
    for (int p = 0; p <= 4; ++p)
        for (int n = 0; n <= std::min(p, 3); ++n)
            for (int i = 0; i <= n; ++i)
                if (p - n <= 2) worst = std::max(worst, leibniz_product(f, h, n, i, p));
    return check("leibniz_rule", worst, 1e-8);
}

CheckResult laplacian_symmetry() {
    const auto g = RadialGrid::gauss(64, 8.0);
    double worst = 0.0;
    for (const auto& F : random_smooth(g, 17, 5))
        for (int k = -4; k <= 4; ++k) {
            const auto a = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(1 - k, 1), BesselOpSpec::power(k, 1)), F);
            const auto b = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(1 + k, 1), BesselOpSpec::power(-k, 1)), F);
            worst = std::max(worst, l21_norm(a - b) / l21_norm(F));
        }
    return check("laplacian_symmetry", worst, 1e-9);
}

CheckResult mode_bookkeeping() {
    const auto g = RadialGrid::gauss(64, 8.0);
    double mismatches = 0.0;
    for (int k = -5; k <= 5; ++k) {
        const auto f = ModeField::sample_radial(k, g, [k](double r) { return std::pow(r, std::abs(k)) * std::exp(-r * r); });
        const auto a = apply_bessel_op(BesselOpSpec::power(k, 1), f);
        const auto b = apply_bessel_op(BesselOpSpec::power(-(k - 1), 1), a);
        // D_0 on mode 0 may go either way; only the round trip is fixed
        if (k != 0 && a.k != k - 1) mismatches += 1;
        if (b.k != k) mismatches += 1;
    }
    return check("mode_bookkeeping", mismatches, 0.0);
}

SuiteReport ops_suite() {
    return {"ops",
            {grid_weights(), grid_differentiation(), mode_vanishing_at_axis(), mixed_expansion(), commutation(),
             shift_rule(), constant_rule(), product_rule(), leibniz_rule(), laplacian_symmetry(), mode_bookkeeping()}};
}

// ---------------------------------------------------------------- spaces

CheckResult sobolev_norm_total() {
    const AxialGrid ax{8.0, 64};
    double worst = 0.0;
    for (int k : {0, 1, 2}) {
        const auto f = ModeField::sample(k, RadialGrid::gauss(64, 8.0), ax, [k](double r, double z) {
            return cplx(std::pow(r, k) * (1 + 0.2 * r * r) * std::exp(-r * r - z * z), 0.1 * std::pow(r, k) * std::exp(-r * r));
        });
        for (int m = 0; m <= 2; ++m) {
            const auto rep = sobolev_norm(f, m);
            double sum = 0.0;
            for (const auto& [key, v] : rep.terms) {
                const auto [p, n, i] = key;
                double binom = 1.0;
                for (int j = 1; j <= i; ++j) binom = binom * (n - i + j) / j;
                sum += std::ldexp(binom, -n) * v * v;
            }
            worst = std::max(worst, rel(std::sqrt(sum), rep.total));
        }
    }
    return check("sobolev_norm_total", worst, 1e-12);
}

CheckResult norm_equivalence_across_i() {
    double worst = 0.0;
    for (int k : {0, 1, 3}) {
        const auto f = ModeField::sample_radial(k, RadialGrid::gauss(96, 10.0), [k](double r) {
            return std::pow(r, k) * (1 + 0.5 * r * r) * std::exp(-r * r);
        });
        const auto rep = sobolev_norm(f, 3);
        for (int n = 1; n <= 3; ++n)
            for (int i = 1; i <= n; ++i) worst = std::max(worst, rel(rep.terms.at({n, n, i}), rep.terms.at({n, n, 0})));
    }
    return check("norm_equivalence_across_i", worst, 1e-6);
}

// one constant fitted on the first half of the family; the residual is how far
// the second half strays above it (ratio to the fitted constant)
double fitted_constant_spread(const std::vector<double>& ratios) {
    const std::size_t half = ratios.size() / 2;
    const double C = *std::max_element(ratios.begin(), ratios.begin() + half);
    const double rest = *std::max_element(ratios.begin() + half, ratios.end());
    if (!std::isfinite(C) || C <= 0.0) return inf;
    return std::max(1.0, rest / C);
}

struct FamilyRatios {
    std::vector<double> algebra, embedding;
};

FamilyRatios spaces_family() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), width(0.5, 2.0);
    const auto grid = RadialGrid::mapped(80, 3.0);
    auto random_field = [&](int k) {
        const double a = width(rng), c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
        return ModeField::sample_radial(k, grid, [=](double r) {
            return std::pow(r, std::abs(k)) * (c0 + c1 * r * r + c2 * r * r * r * r) * std::exp(-a * r * r);
        });
    };
    FamilyRatios out;
    for (int s = 0; s < 20; ++s) {
        const int k = s % 3, q = (s / 3) % 2;
        const auto f = random_field(k), g = random_field(q);
        const double nf = sobolev_norm(f, 2).total, ng = sobolev_norm(g, 2).total;
        out.algebra.push_back(sobolev_norm(pointwise(f, g), 2).total / (nf * ng));
        out.embedding.push_back(bounded_norm(f, 0) / nf);
    }
    return out;
}

CheckResult membership_verdict() {
    auto sech = [](double r, int o) {
        const double s = 1.0 / std::cosh(r), t = std::tanh(r);
        switch (o) {
            case 0: return s;
            case 1: return -s * t;
            case 2: return s * (t * t - s * s);
            case 3: return s * t * (5 * s * s - t * t);
            default: throw std::out_of_range("sech jet");
        }
    };
    RadialJet f = sech;
    RadialJet df = [&](double r, int o) { return sech(r, o + 1); };
    double worst = 0.0;
    auto expect_verdict = [&](const MembershipVerdict& v, bool want, std::optional<double> witness) {
        if (v.verdict != want) {
            worst = inf;
            return;
        }
        if (witness) {
            const auto* w = v.first_failure();
            worst = w ? std::max(worst, std::abs(w->boundary_value - *witness)) : inf;
        }
    };
    expect_verdict(classify_membership(f, 0, 1), true, std::nullopt);
    expect_verdict(classify_membership(df, 0, 1), false, -1.0);
    expect_verdict(classify_membership(df, 1, 1), true, std::nullopt);
    const auto g = RadialGrid::gauss(64, 6.0);
    expect_verdict(classify_membership(ModeField::sample_radial(0, g, [&](double r) { return sech(r, 0); }), 1), true,
                   std::nullopt);
    expect_verdict(classify_membership(ModeField::sample_radial(0, g, [&](double r) { return sech(r, 1); }), 1), false,
                   -1.0);
    expect_verdict(classify_membership(ModeField::sample_radial(1, g, [&](double r) { return sech(r, 1); }), 1), true,
                   std::nullopt);
    return check("membership_verdict", worst, 1e-6);
}

SuiteReport spaces_suite() {
    const auto fam = spaces_family();
    return {"spaces",
            {sobolev_norm_total(), norm_equivalence_across_i(),
             check("banach_algebra", fitted_constant_spread(fam.algebra), 2.0),
             check("sobolev_embedding", fitted_constant_spread(fam.embedding), 2.0), membership_verdict()}};
}

// ---------------------------------------------------------------- hankel

SuiteReport hankel_suite() {
    SuiteReport rep{"hankel", {}};
    double rt = 0.0, pv = 0.0;
    for (int k = 0; k <= 5; ++k) {
        const auto v = HankelPlan::create(k)->validate();
        rt = std::max(rt, v.round_trip);
        pv = std::max(pv, v.parseval);
    }
    rep.checks.push_back(check("plan_round_trip", rt, 1e-6));
    rep.checks.push_back(check("plan_parseval", pv, 1e-8));

    double sym = 0.0;
    for (int k : {0, 2, 5}) {
        const auto p = HankelPlan::create(k, 128, 16.0);
        const Eigen::MatrixXd S = p->kernel() * p->r_grid()->weights().cwiseInverse().asDiagonal();
        sym = std::max(sym, (S - S.transpose()).cwiseAbs().maxCoeff() / S.cwiseAbs().maxCoeff());
    }
    rep.checks.push_back(check("plan_symmetry", sym, 1e-13));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.1, 4.0);
    double tri = 0.0;
    for (int t = 0; t < 200; ++t) {
        const double a = U(rng), b = U(rng), c = U(rng);
        const double d = triangle_kernel(a, b, c);
        for (double e : {triangle_kernel(a, c, b), triangle_kernel(b, a, c), triangle_kernel(b, c, a),
                         triangle_kernel(c, a, b), triangle_kernel(c, b, a)})
            tri = std::max(tri, std::abs(e - d) / (1 + d));
        if ((d > 0.0) != (std::abs(a - c) < b && b < a + c)) tri = inf;
    }
    rep.checks.push_back(check("triangle_support_symmetry", tri, 1e-12));

    // int D u du = 1, and in the other two slots through the permutation symmetry
    double unit = 0.0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const double x = 0.1 + a * 4.9 / 9, y = 0.1 + b * 4.9 / 9;
            unit = std::max(unit, std::abs(triangle_integral(x, y, [](double) { return 1.0; }) - 1.0));
            unit = std::max(unit, std::abs(triangle_integral(y, x, [](double) { return 1.0; }) - 1.0));
        }
    rep.checks.push_back(check("triangle_unit_integrals", unit, 1e-6));

    std::mt19937 frng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), width(0.5, 2.0);
    std::map<int, PlanPtr> plans;
    auto plan = [&](int k) -> const HankelPlan& {
        auto& p = plans[k];
        if (!p) p = HankelPlan::create(k, 128, 16.0);
        return *p;
    };
    auto random_field = [&](int k) {
        const double a = width(frng), c0 = coef(frng), c1 = coef(frng);
        return ModeField::sample_radial(k, plan(k).r_grid(), [=](double r) {
            return std::pow(r, k) * (c0 + c1 * r * r) * std::exp(-a * r * r);
        });
    };
    std::vector<double> alg, emb;
    for (int s = 0; s < 20; ++s) {
        const int k = s % 2, l = (s / 2) % 2;
        const auto f = random_field(k), g = random_field(l);
        const double nf = hankel_space_norm(plan(k), f, 1.0), ng = hankel_space_norm(plan(l), g, 1.0);
        alg.push_back(hankel_space_norm(plan(k + l), pointwise(f, g), 1.0) / (nf * ng));
        emb.push_back(bounded_norm(f, 0) / hankel_space_norm(plan(k), f, 1.5));
    }
    rep.checks.push_back(check("hankel_algebra_inequality", fitted_constant_spread(alg), 2.0));
    rep.checks.push_back(check("hankel_embedding", fitted_constant_spread(emb), 2.0));
    return rep;
}

// ---------------------------------------------------------------- solver

struct KernelSample {
    int k;
    double xi, r, rho;
};

std::vector<KernelSample> kernel_samples(unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.01, 1.0), lx(-3.0, 3.0);
    std::uniform_int_distribution<int> ks(0, 6);
    std::vector<KernelSample> out;
    for (int n = 0; n < count; ++n) {
        const double xi = n % 10 == 0 ? 0.0 : (n % 2 ? -1.0 : 1.0) * std::pow(10.0, lx(rng));
        out.push_back({ks(rng), xi, u(rng), u(rng)});
    }
    return out;
}

CheckResult greens_symmetry() {
    double worst = 0.0;
    for (const auto& s : kernel_samples(31, 200)) {
        const GreensKernel G(s.k, s.xi);
        worst = std::max(worst, rel(G(s.r, s.rho), G(s.rho, s.r)));
    }
    return check("greens_symmetry", worst, 1e-12);
}

CheckResult greens_boundary_zero() {
    double worst = 0.0;
    for (const auto& s : kernel_samples(37, 200)) {
        const GreensKernel G(s.k, s.xi);
        // scale: the two cancelling products I_k(s rho) K_k(s) and I_k(s rho) c I_k(s)
        double scale = 1.0;
        if (!G.is_static()) {
            const double a = std::abs(s.xi);
            scale = (bessel_i_scaled(s.k, a * s.rho) * bessel_k_scaled(s.k, a)).value();
        } else {
            scale = s.k == 0 ? 1.0 : std::pow(s.rho, s.k) / s.k;
        }
        worst = std::max(worst, std::abs(G(1.0, s.rho)) / scale);
    }
    return check("greens_boundary_zero", worst, 1e-12);
}

CheckResult greens_jump() {
    // one-sided second-order differences on either side of r = rho
    double worst = 0.0;
    const double h = 1e-5;
    for (const auto& s : kernel_samples(41, 100)) {
        const double rho = 0.1 + 0.8 * s.rho;
        const GreensKernel G(s.k, std::clamp(s.xi, -20.0, 20.0));
        auto g = [&](double r) { return G(r, rho); };
        const double right = (-3 * g(rho) + 4 * g(rho + h) - g(rho + 2 * h)) / (2 * h);
        const double left = (3 * g(rho) - 4 * g(rho - h) + g(rho - 2 * h)) / (2 * h);
        worst = std::max(worst, rel(right - left, 1.0 / rho));
        worst = std::max(worst, std::abs(g(rho * (1 + 1e-12)) - g(rho * (1 - 1e-12))) / (1.0 / rho));
    }
    return check("greens_jump", worst, 1e-6);
}

CheckResult greens_wronskian() {
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k)
        for (double s : {0.1, 1.0, 10.0, 100.0}) {
            const GreensKernel G(k, s);
            for (double t : {0.05, 0.3, 0.7, 1.0}) {
                const double x = s * t;
                for (int i = 1; i <= 6; ++i) {
                    const double a = (G.tilde_k(i, x) * bessel_i_scaled(i - 1, x)).value();
                    const double b = (bessel_i_scaled(i, x) * G.tilde_k(i - 1, x)).value();
                    // for i < k at small s both products are huge and cancel down to 1/x,
                    // so the residual is measured against the size of the terms
                    const double scale = std::max(1.0, x * (std::abs(a) + std::abs(b)));
                    worst = std::max(worst, std::abs(x * (a + b) - 1.0) / scale);
                }
            }
        }
    return check("greens_wronskian", worst, 1e-12);
}

CheckResult struve_integral_identity() {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.05, 20.0);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
        const int k = n % 5;
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        const double qi = integrate([&](double x) { return bessel_i_scaled(k, x).value() * std::pow(x, k); }, a, b);
        const double qk = integrate([&](double x) { return bessel_k_scaled(k, x).value() * std::pow(x, k); }, a, b);
        worst = std::max(worst, rel(struve_wronskian_i(k, b) - struve_wronskian_i(k, a), qi));
        worst = std::max(worst, rel(struve_wronskian_k(k, b) - struve_wronskian_k(k, a), qk));
    }
    return check("struve_integral_identity", worst, 1e-8);
}

CheckResult bessel_blocks() {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.05, 0.95), xs(0.2, 25.0);
    double worst = 0.0;
    for (int n = 0; n < 5; ++n) {
        const int k = 2 + n % 3, l = k + (n % 2);
        const double s = xs(rng), t = u(rng);
        const BesselBlocks B(k, s);
        const GreensKernel G(k, s);
        auto I = [&](int i) { return [=](double r) { return bessel_i_scaled(std::abs(i), s * r).value(); }; };
        auto Kt = [&](int i) { return [=, &G](double r) { return G.tilde_k(i, s * r).value(); }; };
        auto cmp = [&](double got, const std::function<double(double)>& z, int p, double lo, double hi) {
            const double ref = integrate([&](double r) { return z(r) * std::pow(r, p); }, lo, hi);
            worst = std::max(worst, rel(got, ref));
        };
        cmp(B.block1_i(l, t), I(l), l + 1, 0, t);
        cmp(B.block1_k(l, t), Kt(l), l + 1, t, 1);
        cmp(B.block2_i(l, t), I(l), l, 0, t);
        cmp(B.block2_k(l, t), Kt(l), l, t, 1);
        cmp(B.block3_i(l, t), I(l), l - 2, 0, t);
        cmp(B.block3_k(l, t), Kt(l), l - 2, t, 1);
        cmp(B.block4_i(l, t), I(l - 2), l - 2, 0, t);
        cmp(B.block4_k(l, t), Kt(l - 2), l - 2, t, 1);
    }
    return check("bessel_blocks", worst, 1e-8);
}

// u* = r^k h(r^2) e^{-z^2} with h(t) = (1 - t) / (t + eps): not a polynomial, so the
// radial error decays at a finite geometric rate instead of vanishing at once
ModeField rational_u(int k, const GridPtr& g, const AxialGrid& ax, double eps) {
    return ModeField::sample(k, g, ax, [&](double r, double z) {
        const double t = r * r;
        return cplx(std::pow(r, k) * (1 - t) / (t + eps) * std::exp(-z * z), 0.0);
    });
}

ModeField rational_f(int k, const GridPtr& g, const AxialGrid& ax, double eps) {
    return ModeField::sample(k, g, ax, [&](double r, double z) {
        const double t = r * r, e = std::exp(-z * z);
        const double h = (1 - t) / (t + eps), dh = -(1 + eps) / std::pow(t + eps, 2),
                     d2h = 2 * (1 + eps) / std::pow(t + eps, 3);
        const double radial = std::pow(r, k) * (4.0 * (k + 1) * dh + 4.0 * t * d2h);
        return cplx(radial * e + std::pow(r, k) * h * (4 * z * z - 2) * e, 0.0);
    });
}

CheckResult convergence() {
    // worst ratio of successive errors over 16 -> 32 -> 64; errors at roundoff level
    // (below 1e-12) count as converged
    const AxialGrid ax{10.0, 128};
    double worst = 0.0;
    for (int k : {0, 1, 3}) {
        std::vector<double> err;
        for (int n : {16, 32, 64}) {
            const auto g = RadialGrid::gauss(n, 1.0);
            const auto ustar = rational_u(k, g, ax, 0.04);
            err.push_back(l21_norm(greens_apply(k, rational_f(k, g, ax, 0.04)) - ustar) / l21_norm(ustar));
        }
        for (int j = 1; j < 3; ++j)
            if (err[j] > 1e-12) worst = std::max(worst, err[j] / err[j - 1]);
    }
    return check("convergence", worst, 1e-2);
}

CheckResult poincare() {
    const auto grid = RadialGrid::gauss(40, 1.0);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
        const int k = n % 4;
        const double a = c(rng), b = c(rng), d = c(rng);
        const auto w = ModeField::sample_radial(k, grid, [&](double r) {
            return std::pow(r, k) * (1 - r * r) * (1 + a * r + b * r * r * r + d * std::sin(3 * r * r));
        });
        worst = std::max(worst, poincare_ratio(w));
    }
    return check("poincare", worst, 0.125);
}

CheckResult boundary_defect() {
    const auto grid = RadialGrid::gauss(32, 1.0);
    const AxialGrid ax{10.0, 128};
    Eigen::VectorXcd g(ax.N);
    for (int j = 0; j < ax.N; ++j) g(j) = std::exp(-ax.z(j) * ax.z(j)) * cplx(1.0, 0.5 * std::sin(ax.z(j)));
    double worst = 0.0;
    for (int k : {0, 1, 3}) {
        const auto f = ModeField::sample(k, grid, ax, [k](double r, double z) {
            return cplx(std::pow(r, k) * std::cos(r) * std::exp(-z * z), 0.0);
        });
        worst = std::max(worst, solve(k, f, g).diagnostics.boundary_defect);
    }
    return check("boundary_defect", worst, 1e-6);
}

void bound_scan_checks(SuiteReport& rep) {
    for (BoundQuantity w : all_bound_quantities()) {
        double limit_err = 0.0, excess = 0.0;
        bool any_limit = false, any_bound = false;
        for (int k : {0, 1, 2, 3, 5}) {
            if (k < min_order(w)) continue;
            for (int q = 0; q <= max_power(w); ++q) {
                const auto r = bound_scan(w, k, q);
                for (const auto& l : r.limits) {
                    any_limit = true;
                    limit_err = std::max(limit_err, std::abs(l.value - l.expected));
                }
                if (!std::isfinite(r.max_value)) excess = inf;
                if (r.bound) {
                    any_bound = true;
                    excess = std::max(excess, r.max_value - *r.bound);
                }
            }
        }
        const std::string name = "bound_scan_" + to_string(w);
        if (any_limit) rep.checks.push_back(check(name + "_limits", limit_err, 1e-3));
        if (any_bound) rep.checks.push_back(check(name + "_displayed", std::max(excess, 0.0), 1e-6));
    }
}

SuiteReport solver_suite() {
    SuiteReport rep{"solver",
                    {greens_symmetry(), greens_boundary_zero(), greens_jump(), greens_wronskian(),
                     struve_integral_identity(), bessel_blocks(), convergence(), poincare(), boundary_defect()}};
    bound_scan_checks(rep);
    return rep;
}

}  // namespace

std::vector<std::string> suite_names() { return {"ops", "hankel", "spaces", "solver", "specfun", "all"}; }

SuiteReport run_suite(const std::string& name) {
    if (name == "ops") return ops_suite();
    if (name == "hankel") return hankel_suite();
    if (name == "spaces") return spaces_suite();
    if (name == "solver") return solver_suite();
    if (name == "specfun") return specfun_suite();
    if (name == "all") {
        SuiteReport all{"all", {}};
        for (const auto& s : {"specfun", "ops", "spaces", "hankel", "solver"}) {
            auto r = run_suite(s);
            for (auto& c : r.checks) {
                c.name = std::string(s) + "." + c.name;
                all.checks.push_back(std::move(c));
            }
        }
        return all;
    }
    throw UnknownSuiteError("unknown suite '" + name + "'");
}

}  // namespace radialfs

#include "radialfs/radial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace radialfs {

BesselOpSpec BesselOpSpec::power(double nu, int n) {
    if (n < 0) throw std::invalid_argument("BesselOpSpec::power: negative order");
    BesselOpSpec s;
    for (int j = n - 1; j >= 0; --j) s.indices.push_back(nu - j);
    return s;
}

BesselOpSpec BesselOpSpec::mixed(int k, int n, int i, int axial) {
    if (i < 0 || i > n) throw std::invalid_argument("BesselOpSpec::mixed: need 0 <= i <= n");
    if (axial < 0) throw std::invalid_argument("BesselOpSpec::mixed: negative axial order");
    BesselOpSpec s = compose(power(-k + i, n - i), power(k, i));
    s.axial = axial;
    s.mode_shift = n - 2 * i;
    return s;
}

BesselOpSpec BesselOpSpec::compose(const BesselOpSpec& outer, const BesselOpSpec& inner) {
    BesselOpSpec s = outer;
    s.indices.insert(s.indices.end(), inner.indices.begin(), inner.indices.end());
    s.axial = outer.axial + inner.axial;
    s.mode_shift.reset();
    return s;
}

std::vector<double> BesselOpSpec::euler_coefficients() const {
    // D_nu (sum a_m r^{m-n} d^m) = sum_m (a_m (m - n + nu) + a_{m-1}) r^{m-n-1} d^m
    std::vector<double> a{1.0};
    int n = 0;
    for (auto it = indices.rbegin(); it != indices.rend(); ++it, ++n) {
        const double nu = *it;
        std::vector<double> b(n + 2, 0.0);
        for (int m = 0; m <= n; ++m) {
            b[m] += a[m] * (m - n + nu);
            b[m + 1] += a[m];
        }
        a = std::move(b);
    }
    return a;
}

int BesselOpSpec::resulting_mode(int k) const {
    if (mode_shift) return k + *mode_shift;
    int c = k;
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) {
        const double nu = *it;
        if (nu == -c) ++c;
        else if (nu == c) --c;
        else if (nu > 0) --c;
        else if (nu < 0) ++c;
    }
    return c;
}

Eigen::MatrixXd bessel_matrix(const BesselOpSpec& spec, const RadialGrid& grid, OpForm form) {
    const int N = grid.size();
    const auto& r = grid.nodes();
    if (form == OpForm::Stepwise) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Identity(N, N);
        for (auto it = spec.indices.rbegin(); it != spec.indices.rend(); ++it) {
            Eigen::MatrixXd step = grid.diff();
            step.diagonal() += (*it) * r.cwiseInverse();
            out = step * out;
        }
        return out;
    }
    const auto a = spec.euler_coefficients();
    const int n = spec.order();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd dm = Eigen::MatrixXd::Identity(N, N);
    for (int m = 0; m <= n; ++m) {
        if (m > 0) dm = grid.diff() * dm;
        if (a[m] == 0.0) continue;
        Eigen::VectorXd scale = r.array().pow(double(m - n)) * a[m];
        out += scale.asDiagonal() * dm;
    }
    return out;
}

ModeField apply_bessel_op(const BesselOpSpec& spec, const ModeField& f, OpForm form) {
    if (spec.axial > 0 && !f.has_axial())
        throw std::invalid_argument("apply_bessel_op: axial derivative requested on a z-independent field");
    const auto& r = f.grid->nodes();
    const Eigen::MatrixXd& D = f.grid->diff();

    Eigen::MatrixXcd g = f.values;
    if (spec.axial > 0) g = axial_derivative(g, *f.axial, spec.axial);
    if (form == OpForm::Stepwise) {
        const Eigen::VectorXd rinv = r.cwiseInverse();
        for (auto it = spec.indices.rbegin(); it != spec.indices.rend(); ++it) {
            Eigen::MatrixXcd next = D * g;
            if (*it != 0.0) next += ((*it) * rinv).asDiagonal() * g;
            g = std::move(next);
        }
        return f.like(std::move(g), spec.resulting_mode(f.k));
    }
    const auto a = spec.euler_coefficients();
    const int n = spec.order();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
    for (int m = 0; m <= n; ++m) {
        if (m > 0) g = (D * g).eval();
        if (a[m] == 0.0) continue;
        Eigen::VectorXd scale = r.array().pow(double(m - n)) * a[m];
        out += scale.asDiagonal() * g;
    }
    return f.like(std::move(out), spec.resulting_mode(f.k));
}

double l21_norm(const ModeField& f) {
    const auto& w = f.grid->weights();
    double s = 0.0;
    for (int j = 0; j < f.nz(); ++j)
        for (int i = 0; i < f.nr(); ++i) s += w[i] * std::norm(f.values(i, j));
    if (f.has_axial()) s *= f.axial->dz();
    return std::sqrt(2.0 * std::numbers::pi * s);
}

double relative_residual(const ModeField& a, const ModeField& b) {
    const double num = l21_norm(a - b);
    const double den = l21_norm(b);
    if (den == 0.0) return num;
    return num / den;
}

double check_commutation(double nu, double mu, int n, int m, const ModeField& f) {
    if (n == 0) return 0.0;
    const auto lhs = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(nu, n),
                                                           BesselOpSpec::power(mu, m)), f, OpForm::Euler);
    const auto rhs = apply_bessel_op(BesselOpSpec::compose(BesselOpSpec::power(mu + n, m),
                                                           BesselOpSpec::power(nu - m, n)), f, OpForm::Euler);
    const double nf = l21_norm(f);
    const double d = l21_norm(lhs - rhs);
    return nf > 0.0 ? d / nf : d;
}

ModeField project_mode(const PlanarFunction& psi, int k, GridPtr grid,
                       std::optional<AxialGrid> axial, int M) {
    const int Mmin = 4 * std::abs(k) + 16;
    if (M == 0) M = std::max(Mmin, 64);
    if (M < Mmin) throw std::invalid_argument("project_mode: angular quadrature too small for mode");
    std::vector<double> c(M), s(M);
    std::vector<cplx> e(M);
    for (int q = 0; q < M; ++q) {
        const double th = 2.0 * std::numbers::pi * q / M;
        c[q] = std::cos(th);
        s[q] = std::sin(th);
        e[q] = std::polar(1.0 / M, -k * th);
    }
    ModeField out(k, grid, axial);
    const auto& r = grid->nodes();
    for (int j = 0; j < out.nz(); ++j) {
        const double z = axial ? axial->z(j) : 0.0;
        for (int i = 0; i < out.nr(); ++i) {
            cplx acc = 0.0;
            for (int q = 0; q < M; ++q) acc += psi(r[i] * c[q], r[i] * s[q], z) * e[q];
            out.values(i, j) = acc;
        }
    }
    return out;
}

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

ModeField apply_or_zero(const BesselOpSpec& spec, const ModeField& f) {
    if (spec.axial > 0 && !f.has_axial())
        return f.like(Eigen::MatrixXcd::Zero(f.nr(), f.nz()), spec.resulting_mode(f.k));
    return apply_bessel_op(spec, f);
}

// all set partitions of {0, ..., p-1}
void partitions(int p, int next, std::vector<std::vector<int>>& cur,
                std::vector<std::vector<std::vector<int>>>& out) {
    if (next == p) {
        out.push_back(cur);
        return;
    }
    for (auto& block : cur) {
        block.push_back(next);
        partitions(p, next + 1, cur, out);
        block.pop_back();
    }
    cur.push_back({next});
    partitions(p, next + 1, cur, out);
    cur.pop_back();
}

}  // namespace

double leibniz_product(const ModeField& f, const ModeField& g, int n, int i, int p) {
    if (n < 0 || i < 0 || i > n || p < n) throw std::invalid_argument("leibniz_product: need 0 <= i <= n <= p");
    const int k = f.k, q = g.k;
    const ModeField fg = pointwise(f, g);
    const ModeField lhs = apply_or_zero(BesselOpSpec::mixed(k + q, n, i, p - n), fg);

    // scale: largest of |f g| and the expansion terms, so that an identically
    // vanishing left side still yields a relative figure
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(fg.nr(), fg.nz());
    double scale = std::max(l21_norm(lhs), l21_norm(fg));
    for (int j = 0; j <= i; ++j) {
        for (int l = j; l <= n - (i - j); ++l) {
            for (int s = 0; s <= p - n; ++s) {
                const double c = binom(n - i, l - j) * binom(i, j) * binom(p - n, s);
                const ModeField df = apply_or_zero(BesselOpSpec::mixed(k, n - l, i - j, p - n - s), f);
                const ModeField dg = apply_or_zero(BesselOpSpec::mixed(q, l, j, s), g);
                const ModeField term = lhs.like(c * df.values.cwiseProduct(dg.values), lhs.k);
                scale = std::max(scale, l21_norm(term));
                rhs += term.values;
            }
        }
    }
    const double d = l21_norm(lhs - lhs.like(rhs, lhs.k));
    return scale > 0.0 ? d / scale : d;
}

double compose_faadibruno(const AnalyticMap& u, const ModeField& f, int ell, int p) {
    if (p < 0 || p > 2) throw std::invalid_argument("compose_faadibruno: p must be 0, 1 or 2");
    const int k = f.k;
    const int M = std::max(128, 4 * (std::abs(ell) + std::abs(k) + p) + 16);
    std::vector<cplx> rot(M);
    std::vector<double> th(M);
    for (int q = 0; q < M; ++q) {
        th[q] = 2.0 * std::numbers::pi * q / M;
        rot[q] = std::polar(1.0, k * th[q]);
    }

    // P_ell[u o f^]
    ModeField comp(ell, f.grid, f.axial);
    for (int j = 0; j < f.nz(); ++j) {
        for (int r = 0; r < f.nr(); ++r) {
            cplx acc = 0.0;
            for (int q = 0; q < M; ++q)
                acc += u(0, rot[q] * f.values(r, j)) * std::polar(1.0, -ell * th[q]);
            comp.values(r, j) = acc / double(M);
        }
    }

    std::vector<std::vector<std::vector<int>>> parts;
    std::vector<std::vector<int>> cur;
    partitions(p, 0, cur, parts);

    double worst = 0.0;
    for (int n = 0; n <= p; ++n) {
        for (int i = 0; i <= n; ++i) {
            const int mode_out = ell + n - 2 * i;
            const ModeField lhs = apply_or_zero(BesselOpSpec::mixed(ell, n, i, p - n), comp);

            Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(f.nr(), f.nz());
            Eigen::MatrixXcd mag = Eigen::MatrixXcd::Zero(f.nr(), f.nz());
            for (const auto& part : parts) {
                struct Factor {
                    int mode;
                    double scale;
                    ModeField d;
                };
                std::vector<Factor> fac;
                for (const auto& block : part) {
                    int mi = 0, mn = 0;
                    for (int a : block) {
                        if (a < i) ++mi;
                        if (a < n) ++mn;
                    }
                    const int mz = static_cast<int>(block.size()) - mn;
                    fac.push_back({k + mn - 2 * mi, std::pow(2.0, -0.5 * mn),
                                   apply_or_zero(BesselOpSpec::mixed(k, mn, mi, mz), f)});
                }
                const int order = static_cast<int>(part.size());
                for (int j = 0; j < f.nz(); ++j) {
                    for (int r = 0; r < f.nr(); ++r) {
                        cplx prod_radial = 1.0;
                        int total_mode = 0;
                        for (const auto& fc : fac) {
                            prod_radial *= fc.scale * fc.d.values(r, j);
                            total_mode += fc.mode;
                        }
                        cplx acc = 0.0;
                        double acc_abs = 0.0;
                        for (int q = 0; q < M; ++q) {
                            const cplx uq = u(order, rot[q] * f.values(r, j));
                            acc += uq * std::polar(1.0, (total_mode - mode_out) * th[q]);
                            acc_abs += std::abs(uq);
                        }
                        const double c = std::pow(2.0, 0.5 * n) / M;
                        rhs(r, j) += c * prod_radial * acc;
                        mag(r, j) += c * std::abs(prod_radial) * acc_abs;
                    }
                }
            }
            const ModeField rf = lhs.like(rhs, mode_out);
            const double den = std::max({l21_norm(lhs), l21_norm(rf), l21_norm(lhs.like(mag, mode_out))});
            const double num = l21_norm(lhs - rf);
            worst = std::max(worst, den > 0.0 ? num / den : num);
        }
    }
    return worst;
}

}  // namespace radialfs

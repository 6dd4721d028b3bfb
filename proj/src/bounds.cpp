#include "radialfs/bounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "radialfs/specfun.hpp"

namespace radialfs {

namespace {

using V = SpecFunValue;

V num(double d) { return V::make(d, 0.0); }

double finite_value(const V& v, const char* what) {
    const double out = v.value();
    if (!std::isfinite(v.mantissa) || !std::isfinite(v.log_scale) || !std::isfinite(out))
        throw OverflowError(std::string(what) + ": non-finite intermediate");
    return out;
}

// I_j, K_j, M_j for j = 0..kmax at one argument.
struct PointData {
    double x = 0.0;
    std::vector<V> I, K;
    std::vector<double> M;
};

using PointPtr = std::shared_ptr<const PointData>;

PointPtr compute_point(int kmax, double x) {
    auto p = std::make_shared<PointData>();
    p->x = x;
    for (int j = 0; j <= kmax; ++j) {
        p->I.push_back(bessel_i_scaled(j, x));
        p->K.push_back(bessel_k_scaled(j, x));
    }
    p->M = struve_m_seq(kmax, x);
    for (double m : p->M)
        if (!std::isfinite(m)) throw OverflowError("Struve M: non-finite value");
    return p;
}

std::mutex table_mutex;
std::map<std::pair<int, double>, PointPtr> point_table;
constexpr size_t kTableLimit = 200000;

PointPtr cached_point(int kmax, double x) {
    const std::pair key{kmax, x};
    {
        std::lock_guard lock(table_mutex);
        if (auto it = point_table.find(key); it != point_table.end()) return it->second;
    }
    PointPtr p = compute_point(kmax, x);
    std::lock_guard lock(table_mutex);
    if (point_table.size() > kTableLimit) point_table.clear();
    point_table.emplace(key, p);
    return p;
}

// Closed forms for the order-k kernel at frequency s; ps holds values at x = s.
struct Kernel {
    int k;
    double s;
    PointPtr ps;
    V c;

    Kernel(int k_, double s_, PointPtr at_s) : k(k_), s(s_), ps(std::move(at_s)), c(ps->K[k] / ps->I[k]) {}

    V I(const PointData& p, int i) const { return p.I.at(std::abs(i)); }
    V Kt(const PointData& p, int i) const {
        const int a = std::abs(i);
        const V corr = c * p.I.at(a);
        return ((k - a) % 2 == 0) ? p.K.at(a) - corr : p.K.at(a) + corr;
    }
    V M(const PointData& p, int i) const { return num(p.M.at(i)); }
    V DM(const PointData& p, int l) const { return num(l >= 1 ? (2 * l - 1) * p.M.at(l - 1) : p.M.at(1) - 1.0); }

    V WI(const PointData& p, int l) const { return num(p.x) * (M(p, l) * I(p, l - 1) - I(p, l) * DM(p, l)); }
    V WK(const PointData& p, int l) const { return num(p.x) * (-(M(p, l) * Kt(p, l - 1)) - Kt(p, l) * DM(p, l)); }

    V b1i(const PointData& p, double t, int l) const { return scaled_pow(t, l + 1) * I(p, l + 1) / num(s); }
    V b1k(const PointData& p, double t, int l) const {
        return (scaled_pow(t, l + 1) * Kt(p, l + 1) - Kt(*ps, l + 1)) / num(s);
    }
    V b2i(const PointData& p, int l) const { return scaled_pow(s, -l - 1) * WI(p, l); }
    V b2k(const PointData& p, int l) const { return scaled_pow(s, -l - 1) * (WK(*ps, l) - WK(p, l)); }

    // antiderivatives of I_l rho^{l-2} and Kt_l rho^{l-2}
    V f3i(const PointData& p, double t, int l) const {
        return -(scaled_pow(t, l - 1) * I(p, l)) +
               scaled_pow(s, 2 - l) * num(t) * (M(p, l - 1) * I(p, l - 2) - num(2 * l - 3) * M(p, l - 2) * I(p, l - 1));
    }
    V f3k(const PointData& p, double t, int l) const {
        return -(scaled_pow(t, l - 1) * Kt(p, l)) +
               scaled_pow(s, 2 - l) * num(t) * (M(p, l - 1) * Kt(p, l - 2) + num(2 * l - 3) * M(p, l - 2) * Kt(p, l - 1));
    }
    // antiderivatives of I_{l-2} rho^{l-2} and Kt_{l-2} rho^{l-2}
    V f4i(const PointData& p, double t, int l) const {
        const double d = 2 * l - 3;
        return scaled_pow(t, l - 1) * I(p, l - 2) / num(d) -
               scaled_pow(s, 2 - l) * num(t / d) * (M(p, l - 1) * I(p, l - 2) - num(d) * M(p, l - 2) * I(p, l - 1));
    }
    V f4k(const PointData& p, double t, int l) const {
        const double d = 2 * l - 3;
        return scaled_pow(t, l - 1) * Kt(p, l - 2) / num(d) -
               scaled_pow(s, 2 - l) * num(t / d) * (M(p, l - 1) * Kt(p, l - 2) + num(d) * M(p, l - 2) * Kt(p, l - 1));
    }

    V quantity(BoundQuantity which, int q, const PointData& p, double t) const {
        const V sv = num(s), s2 = num(s * s);
        V out;
        switch (which) {
            case BoundQuantity::I1:
                // the two Block1 terms collapse to (1 - t^{-k} I_k(x) / I_k(s)) / s^2
                out = (num(1.0) - scaled_pow(t, -k) * I(p, k) / I(*ps, k)) / s2;
                break;
            case BoundQuantity::I2:
                out = scaled_pow(t, 1 - k) * sv * (Kt(p, k - 1) * b2i(p, k) + I(p, k - 1) * b2k(p, k));
                break;
            case BoundQuantity::I3:
                out = scaled_pow(t, 1 - k) * sv * (Kt(p, k) * b1i(p, t, k - 1) + I(p, k) * b1k(p, t, k - 1));
                break;
            case BoundQuantity::I4:
                out = scaled_pow(t, -k) * sv * (Kt(p, k + 1) * b1i(p, t, k) + I(p, k + 1) * b1k(p, t, k));
                break;
            case BoundQuantity::I5:
                out = scaled_pow(t, -k) * sv * (Kt(p, k) * b2i(p, k + 1) + I(p, k) * b2k(p, k + 1));
                break;
            case BoundQuantity::I6:
                out = scaled_pow(t, 3 - k) * s2 *
                      (Kt(p, k) * f4i(p, t, k) + I(p, k) * (f4k(*ps, 1.0, k) - f4k(p, t, k)));
                break;
            case BoundQuantity::I7:
                out = scaled_pow(t, 3 - k) * s2 *
                      (Kt(p, k - 2) * f3i(p, t, k) + I(p, k - 2) * (f3k(*ps, 1.0, k) - f3k(p, t, k)));
                break;
            case BoundQuantity::I8:
                out = scaled_pow(t, 1 - k) * s2 *
                      (Kt(p, k) * f3i(p, t, k + 2) + I(p, k) * (f3k(*ps, 1.0, k + 2) - f3k(p, t, k + 2)));
                break;
            case BoundQuantity::I9:
                out = scaled_pow(t, 1 - k) * s2 * (Kt(p, k + 2) * b2i(p, k) + I(p, k + 2) * b2k(p, k));
                break;
        }
        return q == 0 ? out : scaled_pow(s, q) * out;
    }
};

int table_order(int k) { return k + 3; }

void check_order(BoundQuantity which, int k, int q) {
    if (k < min_order(which))
        throw std::domain_error(to_string(which) + ": requires k >= " + std::to_string(min_order(which)));
    if (q < 0 || q > max_power(which))
        throw std::domain_error(to_string(which) + ": power of |xi| out of range");
}

// Majorants of the scanned quantities and their limits as s -> 0 and s -> inf.
struct Majorant {
    std::string name;
    bool at_frequency;  // evaluated at |xi| rather than |xi| t
    double (*eval)(int k, int q, double s);
    int k;
    double small, large;
};

double maj_i1(int k, int q, double s) {
    const V lead = V::make(1.0, k * std::log(0.5 * s) - std::lgamma(k + 1.0));
    return finite_value(scaled_pow(s, q - 2) * (num(1.0) - lead / bessel_i_scaled(k, s)), "I1 majorant");
}

V struve_combo(int k, double s) {
    const auto m = struve_m_seq(k, s);
    return num(m[k]) * bessel_i_scaled(k - 1, s) - num((2 * k - 1) * m[k - 1]) * bessel_i_scaled(k, s);
}

double maj_f1(int k, int q, double s) {
    return finite_value(scaled_pow(s, q + 1 - k) * bessel_k_scaled(k - 1, s) * struve_combo(k, s), "F1");
}

double maj_f2(int k, int q, double s) {
    return finite_value(scaled_pow(s, q - k) * struve_combo(k, s) / bessel_i_scaled(k, s), "F2");
}

double f3_constant(int k) { return std::exp((k - 1) * std::log(2.0) + 0.5 * std::log(std::numbers::pi) + std::lgamma(k + 0.5)); }

double maj_f3(int k, int q, double s) {
    const double mk = struve_m_seq(k, s)[k];
    const V inner = num(f3_constant(k)) - num(mk) / bessel_i_scaled(k, s);
    const double norm = std::exp((k - 1) * std::log(2.0) + std::lgamma(k));
    return finite_value(scaled_pow(s, q - 1) * inner / num(norm), "F3");
}

// (2k+1)/(2k) F3 for k >= 1; the k = 0 case is pi s^{q-1}/2 * L_0/I_0.
double maj_f3_i5(int k, int q, double s) {
    if (k >= 1) return (2.0 * k + 1.0) / (2.0 * k) * maj_f3(k, q, s);
    const double m0 = struve_m_seq(0, s)[0];
    const V ratio = num(1.0) - num(2.0 / std::numbers::pi * m0) / bessel_i_scaled(0, s);
    return finite_value(num(0.5 * std::numbers::pi) * scaled_pow(s, q - 1) * ratio, "F3 (k = 0)");
}

double maj_f4(int k, int q, double s) {
    return finite_value(scaled_pow(s, q) * bessel_k_scaled(k, s) * bessel_i_scaled(k, s), "F4");
}

double maj_f5(int k, int q, double s) {
    return finite_value(num(2.0) * bessel_i_scaled(k + 1, s) / (scaled_pow(s, 1 - q) * bessel_i_scaled(k, s)), "F5");
}

std::vector<Majorant> majorants(BoundQuantity which, int k, int q) {
    const bool q0 = q == 0;
    auto lim = [&](double a0, double b0, double a1, double b1) { return q0 ? std::pair{a0, b0} : std::pair{a1, b1}; };
    std::vector<Majorant> out;
    auto add = [&](std::string name, bool at_freq, double (*f)(int, int, double), int kk, std::pair<double, double> l) {
        out.push_back({std::move(name), at_freq, f, kk, l.first, l.second});
    };
    const double f3_large = std::sqrt(std::numbers::pi) * std::exp(std::lgamma(k + 0.5) - std::lgamma(std::max(k, 1)));
    switch (which) {
        case BoundQuantity::I1: {
            const double small = q == 0 ? 1.0 / (4.0 * (k + 1)) : 0.0;
            out.push_back({"I1 majorant", true, maj_i1, k, small, q == 2 ? 1.0 : 0.0});
            break;
        }
        case BoundQuantity::I2:
            add("F1", false, maj_f1, k, lim(0, 0, 0, 0.5));
            add("F2", false, maj_f2, k, lim(1.0 / (2 * k + 1), 0, 0, 1));
            add("F3", true, maj_f3, k, lim(2.0 * k / (2 * k + 1), 0, 0, f3_large));
            break;
        case BoundQuantity::I3:
            add("F4", false, maj_f4, k, lim(1.0 / (2 * k), 0, 0, 0.5));
            break;
        case BoundQuantity::I4:
            add("F4[k+1]", false, maj_f4, k + 1, lim(1.0 / (2 * (k + 1)), 0, 0, 0.5));
            add("F5", true, maj_f5, k, lim(1.0 / (k + 1), 0, 0, 2));
            break;
        case BoundQuantity::I5: {
            add("F1[k+1]", false, maj_f1, k + 1, lim(0, 0, 0, 0.5));
            const double large = k == 0 ? 0.5 * std::numbers::pi : (2.0 * k + 1) / (2.0 * k) * f3_large;
            add("(2k+1)/(2k) F3", true, maj_f3_i5, k, lim(1, 0, 0, large));
            break;
        }
        default:
            break;
    }
    return out;
}

}  // namespace

std::string to_string(BoundQuantity q) { return "I" + std::to_string(static_cast<int>(q) + 1); }

BoundQuantity bound_quantity_from_string(const std::string& s) {
    for (auto q : all_bound_quantities())
        if (to_string(q) == s) return q;
    throw std::invalid_argument("unknown bound quantity: " + s);
}

std::vector<BoundQuantity> all_bound_quantities() {
    std::vector<BoundQuantity> out;
    for (int i = 0; i < 9; ++i) out.push_back(static_cast<BoundQuantity>(i));
    return out;
}

int min_order(BoundQuantity q) {
    switch (q) {
        case BoundQuantity::I2:
        case BoundQuantity::I3:
            return 1;
        case BoundQuantity::I6:
        case BoundQuantity::I7:
            return 2;
        default:
            return 0;
    }
}

int max_power(BoundQuantity q) {
    switch (q) {
        case BoundQuantity::I1:
            return 2;
        case BoundQuantity::I2:
        case BoundQuantity::I3:
        case BoundQuantity::I4:
        case BoundQuantity::I5:
            return 1;
        default:
            return 0;
    }
}

double bound_value(BoundQuantity which, int k, int q, double arg, double xi) {
    check_order(which, k, q);
    const double s = std::abs(xi);
    if (!(arg > 0.0 && arg <= 1.0)) throw std::domain_error("bound_value: argument must lie in (0, 1]");
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("bound_value: frequency must be finite and nonzero");
    const Kernel K(k, s, compute_point(table_order(k), s));
    const PointPtr p = arg == 1.0 ? K.ps : compute_point(table_order(k), s * arg);
    return finite_value(K.quantity(which, q, *p, arg), to_string(which).c_str());
}

std::optional<double> displayed_bound(BoundQuantity which, int k, int q) {
    switch (which) {
        case BoundQuantity::I1:
            if (q == 2) return 1.0;
            return std::nullopt;
        case BoundQuantity::I6:
            return 4.0 * (k - 1) / (2.0 * k - 3);
        case BoundQuantity::I7:
            return 2.0 * (k - 1);
        case BoundQuantity::I8:
            return 4.0 * k + 3;
        case BoundQuantity::I9:
            return (4.0 * k + 3) / (2.0 * k + 1);
        default:
            return std::nullopt;
    }
}

int ScanGrid::arg_points() const { return static_cast<int>(std::lround(arg_decades * points_per_decade)) + 1; }
int ScanGrid::xi_points() const { return static_cast<int>(std::lround(xi_decades * points_per_decade)) + 1; }
double ScanGrid::arg(int a) const { return arg_max * std::pow(10.0, double(a - (arg_points() - 1)) / points_per_decade); }
double ScanGrid::xi(int b) const { return xi_min * std::pow(10.0, double(b) / points_per_decade); }
double ScanGrid::lattice(int n) const { return arg(0) * xi_min * std::pow(10.0, double(n) / points_per_decade); }

bool BoundScanReport::pass() const {
    if (!std::isfinite(max_value) || !bound_pass) return false;
    for (const auto& l : limits)
        if (!l.pass) return false;
    return true;
}

nlohmann::json BoundScanReport::to_json() const {
    nlohmann::json lims = nlohmann::json::array();
    for (const auto& l : limits)
        lims.push_back({{"label", l.label}, {"at", l.at}, {"value", l.value}, {"expected", l.expected}, {"pass", l.pass}});
    return {{"quantity", to_string(which)},
            {"k", k},
            {"q", q},
            {"max_value", max_value},
            {"argmax", {{"arg", argmax_arg}, {"xi", argmax_xi}}},
            {"bound", bound ? nlohmann::json(*bound) : nlohmann::json(nullptr)},
            {"bound_pass", bound_pass},
            {"limits", lims},
            {"pass", pass()}};
}

BoundScanReport bound_scan(BoundQuantity which, int k, int q, const ScanGrid& grid, double limit_tol,
                           double bound_tol) {
    check_order(which, k, q);
    if (!(grid.arg_max > 0.0 && grid.arg_max <= 1.0) || !(grid.xi_min > 0.0) || grid.points_per_decade < 1)
        throw std::invalid_argument("bound_scan: invalid scan grid");
    BoundScanReport rep;
    rep.which = which;
    rep.k = k;
    rep.q = q;
    rep.max_value = -std::numeric_limits<double>::infinity();
    const int kmax = table_order(k);
    const int na = grid.arg_points(), nb = grid.xi_points();
    const std::string name = to_string(which);
    for (int b = 0; b < nb; ++b) {
        const double s = grid.xi(b);
        const Kernel K(k, s, cached_point(kmax, s));
        for (int a = 0; a < na; ++a) {
            const double t = grid.arg(a);
            const PointPtr p = cached_point(kmax, grid.lattice(a + b));
            const double v = finite_value(K.quantity(which, q, *p, t), name.c_str());
            if (v > rep.max_value) {
                rep.max_value = v;
                rep.argmax_arg = t;
                rep.argmax_xi = s;
            }
        }
    }
    rep.bound = displayed_bound(which, k, q);
    if (rep.bound) rep.bound_pass = rep.max_value <= *rep.bound + bound_tol;

    auto check = [&](std::string label, double at, double value, double expected) {
        rep.limits.push_back({std::move(label), at, value, expected, std::abs(value - expected) <= limit_tol});
    };
    for (const auto& m : majorants(which, k, q)) {
        const double lo = m.at_frequency ? grid.xi(0) : grid.lattice(0);
        const double hi = m.at_frequency ? grid.xi(nb - 1) : grid.lattice(na + nb - 2);
        // the majorants approach their s->0 limits like c1 s + c2 s^2; two Richardson steps remove both terms
        const double v1 = m.eval(m.k, q, lo), v2 = m.eval(m.k, q, lo / 2), v4 = m.eval(m.k, q, lo / 4);
        const double r1 = 2 * v2 - v1, r2 = 2 * v4 - v2;
        check(m.name + ", s->0", lo, (4 * r2 - r1) / 3, m.small);
        check(m.name + ", s->inf", hi, m.eval(m.k, q, hi), m.large);
    }
    if (which == BoundQuantity::I1 && q == 0) {
        const double v = bound_value(which, k, 0, grid.arg(0), grid.xi(0));
        check("I1 at smallest (rho, xi)", grid.xi(0), v, 1.0 / (4.0 * (k + 1)));
    }
    return rep;
}

BesselBlocks::BesselBlocks(int k, double s) : k_(k), s_(s) {
    if (k < 0) throw std::domain_error("BesselBlocks: order must be >= 0");
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("BesselBlocks: frequency must be positive");
}

namespace {

struct BlockEval {
    Kernel K;
    PointPtr p;
    double t;
};

BlockEval block_setup(int k, double s, int l, double t, bool lower_limit) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("BesselBlocks: limit must lie in [0, 1]");
    if (lower_limit && t == 0.0) throw std::domain_error("BesselBlocks: lower limit must be positive");
    const int kmax = std::max(k, l) + 3;
    Kernel K(k, s, compute_point(kmax, s));
    PointPtr p = t == 1.0 ? K.ps : compute_point(kmax, s * t);
    return {std::move(K), std::move(p), t};
}

void require_l2(int l) {
    if (l < 2) throw std::domain_error("BesselBlocks: order must be >= 2");
}

}  // namespace

double BesselBlocks::block1_i(int l, double b) const {
    if (b == 0.0) return 0.0;
    const auto e = block_setup(k_, s_, l, b, false);
    return finite_value(e.K.b1i(*e.p, b, l), "block1_i");
}

double BesselBlocks::block1_k(int l, double a) const {
    const auto e = block_setup(k_, s_, l, a, true);
    return finite_value(e.K.b1k(*e.p, a, l), "block1_k");
}

double BesselBlocks::block2_i(int l, double b) const {
    if (b == 0.0) return 0.0;
    const auto e = block_setup(k_, s_, l, b, false);
    return finite_value(e.K.b2i(*e.p, l), "block2_i");
}

double BesselBlocks::block2_k(int l, double a) const {
    const auto e = block_setup(k_, s_, l, a, true);
    return finite_value(e.K.b2k(*e.p, l), "block2_k");
}

double BesselBlocks::block3_i(int l, double b) const {
    require_l2(l);
    if (b == 0.0) return 0.0;
    const auto e = block_setup(k_, s_, l, b, false);
    return finite_value(e.K.f3i(*e.p, b, l), "block3_i");
}

double BesselBlocks::block3_k(int l, double a) const {
    require_l2(l);
    const auto e = block_setup(k_, s_, l, a, true);
    return finite_value(e.K.f3k(*e.K.ps, 1.0, l) - e.K.f3k(*e.p, a, l), "block3_k");
}

double BesselBlocks::block4_i(int l, double b) const {
    require_l2(l);
    if (b == 0.0) return 0.0;
    const auto e = block_setup(k_, s_, l, b, false);
    return finite_value(e.K.f4i(*e.p, b, l), "block4_i");
}

double BesselBlocks::block4_k(int l, double a) const {
    require_l2(l);
    const auto e = block_setup(k_, s_, l, a, true);
    return finite_value(e.K.f4k(*e.K.ps, 1.0, l) - e.K.f4k(*e.p, a, l), "block4_k");
}

double struve_wronskian_i(int k, double x) {
    if (k < 0 || !(x > 0.0)) throw std::domain_error("struve_wronskian_i: requires k >= 0, x > 0");
    const auto p = compute_point(k + 1, x);
    const V dm = num(k >= 1 ? (2 * k - 1) * p->M[k - 1] : p->M[1] - 1.0);
    const V w = num(x) * (num(p->M[k]) * p->I[std::abs(k - 1)] - p->I[k] * dm);
    return finite_value(w, "struve_wronskian_i");
}

double struve_wronskian_k(int k, double x) {
    if (k < 0 || !(x > 0.0)) throw std::domain_error("struve_wronskian_k: requires k >= 0, x > 0");
    const auto p = compute_point(k + 1, x);
    const V dm = num(k >= 1 ? (2 * k - 1) * p->M[k - 1] : p->M[1] - 1.0);
    const V w = num(x) * (-(num(p->M[k]) * p->K[std::abs(k - 1)]) - p->K[k] * dm);
    return finite_value(w, "struve_wronskian_k");
}

}  // namespace radialfs

#include "radialfs/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace radialfs {

namespace {

double binom(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

// (p, n, i) triples with 0 <= i <= n <= p <= m; p = n only when z-independent
std::vector<std::tuple<int, int, int>> index_triples(int m, bool axial) {
    std::vector<std::tuple<int, int, int>> out;
    for (int p = 0; p <= m; ++p)
        for (int n = axial ? 0 : p; n <= p; ++n)
            for (int i = 0; i <= n; ++i) out.emplace_back(p, n, i);
    return out;
}

cplx pairing_c(const ModeField& a, const ModeField& b) {
    const auto& w = a.grid->weights();
    cplx s = 0.0;
    for (int j = 0; j < a.nz(); ++j)
        for (int i = 0; i < a.nr(); ++i) s += w[i] * a.values(i, j) * b.values(i, j);
    if (a.has_axial()) s *= a.axial->dz();
    return 2.0 * std::numbers::pi * s;
}

// Lagrange extrapolation to x = 0 from the first `pts` entries
Eigen::RowVectorXd origin_weights(const Eigen::VectorXd& r, int pts) {
    Eigen::RowVectorXd l(pts);
    for (int a = 0; a < pts; ++a) {
        double v = 1.0;
        for (int b = 0; b < pts; ++b)
            if (b != a) v *= r[b] / (r[b] - r[a]);
        l[a] = v;
    }
    return l;
}

double smooth_step(double s) {
    auto h = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    s = std::clamp(s, 0.0, 1.0);
    return h(s) / (h(s) + h(1.0 - s));
}

// Laurent coefficients at r = 0 after applying the index list to a Taylor jet
std::map<int, double> apply_to_jet(const BesselOpSpec& spec, std::map<int, double> c) {
    for (auto it = spec.indices.rbegin(); it != spec.indices.rend(); ++it) {
        std::map<int, double> next;
        for (auto [j, v] : c) {
            const double nv = (j + *it) * v;
            if (nv != 0.0) next[j - 1] += nv;
        }
        c = std::move(next);
    }
    return c;
}

double euler_value(const BesselOpSpec& spec, const RadialJet& f, double r) {
    const auto a = spec.euler_coefficients();
    const int n = spec.order();
    double s = 0.0;
    for (int m = 0; m <= n; ++m)
        if (a[m] != 0.0) s += a[m] * std::pow(r, m - n) * f(r, m);
    return s;
}

}  // namespace

nlohmann::json SobolevNormReport::to_json() const {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [key, v] : terms) {
        const auto [p, n, i] = key;
        t[std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(i)] = v;
    }
    return {{"space", "H"}, {"k", k}, {"m", m}, {"total", total}, {"terms", t}};
}

SobolevNormReport sobolev_norm(const ModeField& f, int m) {
    if (m < 0) throw std::invalid_argument("sobolev_norm: negative order");
    SobolevNormReport rep;
    rep.k = f.k;
    rep.m = m;
    double sq = 0.0;
    for (auto [p, n, i] : index_triples(m, f.has_axial())) {
        const double t = l21_norm(apply_bessel_op(BesselOpSpec::mixed(f.k, n, i, p - n), f));
        rep.terms[{p, n, i}] = t;
        sq += std::ldexp(binom(n, i), -n) * t * t;
    }
    rep.total = std::sqrt(sq);
    return rep;
}

std::string to_string(SpaceTag t) {
    switch (t) {
        case SpaceTag::C: return "C";
        case SpaceTag::Cb: return "Cb";
        case SpaceTag::S: return "S";
    }
    return "C";
}

SpaceTag space_tag_from_string(const std::string& s) {
    if (s == "C") return SpaceTag::C;
    if (s == "Cb") return SpaceTag::Cb;
    if (s == "S") return SpaceTag::S;
    throw std::invalid_argument("unknown space tag: " + s);
}

const MembershipWitness* MembershipVerdict::first_failure() const {
    for (const auto& w : witnesses)
        if (!w.ok) return &w;
    return nullptr;
}

nlohmann::json MembershipVerdict::to_json() const {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : witnesses)
        ws.push_back({{"p", w.p}, {"n", w.n}, {"i", w.i}, {"boundary_value", w.boundary_value},
                      {"continuity_defect", w.continuity_defect},
                      {"growth_defect", w.growth_defect}, {"ok", w.ok}});
    return {{"space", to_string(space)}, {"k", k}, {"m", m}, {"verdict", verdict}, {"witnesses", ws}};
}

MembershipVerdict classify_membership(const RadialJet& f, int k, int m, SpaceTag space,
                                      const MembershipOptions& opt) {
    MembershipVerdict v;
    v.space = space;
    v.k = k;
    v.m = m;
    std::map<int, double> jet;
    double fact = 1.0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) fact *= j;
        const double c = f(0.0, j) / fact;
        if (c != 0.0) jet[j] = c;
    }
    for (auto [p, n, i] : index_triples(m, false)) {
        const auto spec = BesselOpSpec::mixed(k, n, i);
        const auto lc = apply_to_jet(spec, jet);
        MembershipWitness w{p, n, i};
        auto c0 = lc.find(0);
        w.boundary_value = (k + n - 2 * i) * (c0 == lc.end() ? 0.0 : c0->second);
        for (auto [j, c] : lc)
            if (j < 0) w.continuity_defect = std::max(w.continuity_defect, std::abs(c));
        if (space == SpaceTag::Cb) {
            // sup over (0, R), including points crowding towards R
            double sup = 0.0;
            for (int q = 1; q <= 100; ++q) sup = std::max(sup, std::abs(euler_value(spec, f, opt.R * q / 101.0)));
            for (int q = 1; q <= 12; ++q)
                sup = std::max(sup, std::abs(euler_value(spec, f, opt.R * (1.0 - std::pow(10.0, -q)))));
            w.growth_defect = std::isfinite(sup) ? sup / 1e8 : INFINITY;
        } else if (space == SpaceTag::S) {
            double core = 1.0, tail = 0.0;
            for (int q = 1; q <= 100; ++q) core = std::max(core, std::abs(euler_value(spec, f, 0.1 * q)));
            for (double r : {20.0, 40.0, 80.0})
                tail = std::max(tail, std::pow(r, m + 2) * std::abs(euler_value(spec, f, r)));
            w.growth_defect = std::isfinite(tail) ? tail / core : INFINITY;
        }
        w.ok = std::abs(w.boundary_value) <= opt.boundary_tol && w.continuity_defect <= opt.continuity_tol &&
               (space == SpaceTag::C || w.growth_defect <= (space == SpaceTag::Cb ? 1.0 : opt.continuity_tol));
        v.verdict = v.verdict && w.ok;
        v.witnesses.push_back(w);
    }
    return v;
}

Eigen::VectorXcd extrapolate_to_origin(const ModeField& f, int points) {
    if (points < 1 || points > f.nr()) throw std::invalid_argument("extrapolate_to_origin: bad point count");
    const auto l = origin_weights(f.grid->nodes(), points);
    return (l * f.values.topRows(points)).transpose();
}

MembershipVerdict classify_membership(const ModeField& f, int m, SpaceTag space,
                                      const MembershipOptions& opt) {
    MembershipVerdict v;
    v.space = space;
    v.k = f.k;
    v.m = m;
    for (auto [p, n, i] : index_triples(m, f.has_axial())) {
        const auto g = apply_bessel_op(BesselOpSpec::mixed(f.k, n, i, p - n), f);
        const Eigen::VectorXcd e3 = extrapolate_to_origin(g, 4);
        const Eigen::VectorXcd e2 = extrapolate_to_origin(g, 3);
        const double sup = g.values.cwiseAbs().maxCoeff();
        MembershipWitness w{p, n, i};
        Eigen::Index at = 0;
        e3.cwiseAbs().maxCoeff(&at);
        w.boundary_value = (f.k + n - 2 * i) * e3[at].real();
        if (std::abs(e3[at].imag()) > std::abs(e3[at].real()))
            w.boundary_value = (f.k + n - 2 * i) * e3[at].imag();
        w.continuity_defect = (e3 - e2).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, sup);
        if (space == SpaceTag::Cb) {
            w.growth_defect = std::isfinite(sup) ? sup / 1e8 : INFINITY;
        } else if (space == SpaceTag::S) {
            // decay over the outermost nodes relative to the core
            const auto& r = g.grid->nodes();
            // samples below the differentiation noise floor count as zero
            const double floor = 1e-12 * sup;
            double tail = 0.0;
            const int n0 = g.nr() - std::max(1, g.nr() / 16);
            for (int a = n0; a < g.nr(); ++a) {
                const double v = std::max(0.0, g.values.row(a).cwiseAbs().maxCoeff() - floor);
                tail = std::max(tail, std::pow(r[a], m + 2) * v);
            }
            w.growth_defect = g.grid->type() == GridType::Mapped ? tail / scale : INFINITY;
        }
        w.ok = std::abs(w.boundary_value) <= opt.boundary_tol && w.continuity_defect <= opt.continuity_tol * scale &&
               (space == SpaceTag::C || w.growth_defect <= (space == SpaceTag::Cb ? 1.0 : opt.continuity_tol));
        v.verdict = v.verdict && w.ok;
        v.witnesses.push_back(w);
    }
    return v;
}

double weak_derivative_residual(const ModeField& f, const ModeField& g, int n, int i, int p,
                                const std::vector<ModeField>& phis) {
    if (i < 0 || i > n || n > p) throw std::invalid_argument("weak_derivative_residual: need 0 <= i <= n <= p");
    const int k = f.k;
    const auto adj = BesselOpSpec::compose(BesselOpSpec::power(k + n - i, n - i),
                                           BesselOpSpec::power(-k - n + 2 * i, i));
    const double sign = (p % 2) ? -1.0 : 1.0;
    const double nf = l21_norm(f);
    double worst = 0.0;
    for (const auto& phi : phis) {
        auto spec = adj;
        spec.axial = p - n;
        const auto aphi = apply_bessel_op(spec, phi);
        const double d = std::abs(sign * pairing_c(f, aphi) - pairing_c(g, phi));
        if (d == 0.0) continue;
        const double den = nf * l21_norm(phi);
        worst = std::max(worst, den > 0.0 ? d / den : INFINITY);
    }
    return worst;
}

std::vector<ModeField> weak_test_family(int mode, GridPtr grid, std::optional<AxialGrid> axial) {
    const double R = grid->R();
    if (!std::isfinite(R)) throw std::invalid_argument("weak_test_family: needs a finite radius");
    const int l = std::abs(mode);
    std::vector<ModeField> out;
    for (double a : {0.5, 2.0, 6.0}) {
        for (double z0 : axial ? std::vector<double>{-1.0, 0.5} : std::vector<double>{0.0}) {
            out.push_back(ModeField::sample(mode, grid, axial, [=](double r, double z) {
                const double b = 1.0 - (r / R) * (r / R);
                const double zf = axial ? std::exp(-(z - z0) * (z - z0)) : 1.0;
                return cplx(std::pow(r, l) * std::pow(b, 6) * std::exp(-a * r * r / (R * R)) * zf, 0.0);
            }));
        }
    }
    return out;
}

Eigen::VectorXcd trace_boundary(const ModeField& f) {
    const double R = f.grid->R();
    if (!std::isfinite(R)) throw std::invalid_argument("trace_boundary: grid has no finite boundary");
    return (f.grid->interp_row(R) * f.values).transpose();
}

ModeField trace_extension(const Eigen::VectorXcd& g, int k, GridPtr grid, std::optional<AxialGrid> axial) {
    const double R = grid->R();
    if (!std::isfinite(R)) throw std::invalid_argument("trace_extension: grid has no finite boundary");
    const int nz = axial ? axial->N : 1;
    if (g.size() != nz) throw std::invalid_argument("trace_extension: trace length does not match axial grid");
    ModeField out(k, grid, axial);
    const auto& r = grid->nodes();
    for (int a = 0; a < out.nr(); ++a) {
        const double prof = std::pow(r[a] / R, std::abs(k)) * smooth_step(r[a] / (0.75 * R));
        for (int j = 0; j < nz; ++j) out.values(a, j) = g[j] * prof;
    }
    return out;
}

double schwartz_seminorm(const ModeField& f, int m1, int m2, int p) {
    if (p < 0 || m1 < 0 || m2 < 0) throw std::invalid_argument("schwartz_seminorm: negative index");
    const auto& r = f.grid->nodes();
    const int N = f.nr();
    double best = 0.0;
    for (auto [q, n, i] : index_triples(p, f.has_axial())) {
        const auto g = apply_bessel_op(BesselOpSpec::mixed(f.k, n, i, q - n), f);
        auto weight = [&](double rr, int col) {
            const double z = f.has_axial() ? f.axial->z(col) : 0.0;
            return std::pow(std::hypot(rr, z), m1);
        };
        auto val = [&](double rr, int col, cplx x) { return weight(rr, col) * std::pow(std::abs(x), m2); };
        // nodes and the extrapolant at the origin
        const Eigen::VectorXcd e0 = extrapolate_to_origin(g, 4);
        double local = 0.0;
        int arg_r = 0, arg_c = 0;
        for (int c = 0; c < g.nz(); ++c) {
            local = std::max(local, val(0.0, c, e0[c]));
            for (int a = 0; a < N; ++a) {
                const double v = val(r[a], c, g.values(a, c));
                if (v > local) {
                    local = v;
                    arg_r = a;
                    arg_c = c;
                }
            }
        }
        // golden-section refinement in r around the best node
        const double lo = arg_r > 0 ? r[arg_r - 1] : 0.5 * r[0];
        const double hi = arg_r + 1 < N ? r[arg_r + 1] : r[N - 1];
        const Eigen::VectorXcd col = g.values.col(arg_c);
        auto h = [&](double x) { return val(x, arg_c, (g.grid->interp_row(x) * col)(0)); };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi, x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = h(x1), f2 = h(x2);
        for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + b); ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2; x2 = a + phi * (b - a); f2 = h(x2);
            } else {
                b = x2; x2 = x1; f2 = f1; x1 = b - phi * (b - a); f1 = h(x1);
            }
        }
        local = std::max({local, f1, f2});
        best = std::max(best, local);
    }
    return best;
}

double bounded_norm(const ModeField& f, int m) { return schwartz_seminorm(f, 0, 1, m); }

}  // namespace radialfs

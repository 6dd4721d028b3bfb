#include "radialfs/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "radialfs/quadrature.hpp"
#include "radialfs/specfun.hpp"

namespace radialfs {

namespace {

constexpr char kMagic[4] = {'H', 'N', 'K', 'L'};
constexpr std::uint32_t kVersion = 1;

std::string cache_path(int k, int N, double R) {
    const char* dir = std::getenv("RADIALFS_CACHE");
    if (!dir || !*dir) return {};
    std::ostringstream name;
    name << "hankel_k" << k << "_n" << N << "_r" << R << ".bin";
    return (std::filesystem::path(dir) / name.str()).string();
}

double sign_for_mode(int mode) { return (mode < 0 && (-mode) % 2 == 1) ? -1.0 : 1.0; }

}  // namespace

void HankelPlan::build() {
    const auto& r = r_->nodes();
    const auto& rho = rho_->nodes();
    const int nr = r_->size(), nq = rho_->size();
    Eigen::MatrixXd J(nq, nr);
    const bool same = r_->same_as(*rho_);
    for (int j = 0; j < nq; ++j) {
        for (int l = same ? j : 0; l < nr; ++l) {
            J(j, l) = bessel_j(k_, rho[j] * r[l]);
            if (same) J(l, j) = J(j, l);
        }
    }
    K_ = J * r_->weights().asDiagonal();
}

std::shared_ptr<const HankelPlan> HankelPlan::create(int k, int N, double R) {
    if (k < 0) throw std::invalid_argument("HankelPlan: order must be non-negative");
    auto grid = RadialGrid::gauss(N, R);
    const std::string path = cache_path(k, N, R);
    if (!path.empty()) {
        if (auto p = load(path, k, grid)) return p;
    }
    auto p = create(k, grid, nullptr);
    if (!path.empty()) {
        try {
            std::filesystem::create_directories(std::filesystem::path(path).parent_path());
            p->save(path);
        } catch (const std::exception& e) {
            std::cerr << "warning: could not write plan cache " << path << ": " << e.what() << "\n";
        }
    }
    return p;
}

std::shared_ptr<const HankelPlan> HankelPlan::create(int k, GridPtr r_grid, GridPtr rho_grid) {
    if (k < 0) throw std::invalid_argument("HankelPlan: order must be non-negative");
    if (!r_grid) throw std::invalid_argument("HankelPlan: missing grid");
    auto p = std::shared_ptr<HankelPlan>(new HankelPlan());
    p->k_ = k;
    p->r_ = r_grid;
    p->rho_ = rho_grid ? rho_grid : r_grid;
    p->build();
    return p;
}

PlanValidation HankelPlan::validate() const {
    PlanValidation v;
    // inverse direction: J_k(r_l rho_j) w^rho_j
    Eigen::MatrixXd Kinv;
    if (r_->same_as(*rho_)) {
        Kinv = K_;
    } else {
        Kinv = (K_ * r_->weights().cwiseInverse().asDiagonal()).transpose() * rho_->weights().asDiagonal();
    }
    const auto& r = r_->nodes();
    for (int j = 0; j <= 3; ++j) {
        for (double a : {0.5, 1.0}) {
            Eigen::VectorXd f(r.size());
            for (int l = 0; l < r.size(); ++l) f[l] = std::pow(r[l], k_ + 2 * j) * std::exp(-a * r[l] * r[l]);
            const Eigen::VectorXd h = K_ * f;
            const Eigen::VectorXd back = Kinv * h;
            const double nf2 = r_->weights().dot(f.cwiseAbs2());
            const double nh2 = rho_->weights().dot(h.cwiseAbs2());
            const double nd2 = r_->weights().dot((back - f).cwiseAbs2());
            v.round_trip = std::max(v.round_trip, std::sqrt(nd2 / nf2));
            v.parseval = std::max(v.parseval, std::abs(nf2 - nh2) / nf2);
        }
    }
    v.pass = v.round_trip <= 1e-6 && v.parseval <= 1e-8;
    return v;
}

void HankelPlan::save(const std::string& path) const {
    if (r_->type() != GridType::Gauss || !r_->same_as(*rho_))
        throw std::invalid_argument("HankelPlan::save: only single-grid Gauss plans are cached");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    const double hdr[4] = {double(k_), double(r_->size()), r_->R(), r_->map_param()};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    // row-major
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = K_;
    out.write(reinterpret_cast<const char*>(rm.data()), std::streamsize(sizeof(double) * rm.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::shared_ptr<const HankelPlan> HankelPlan::load(const std::string& path, int k, const GridPtr& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return nullptr;
    char magic[4];
    std::uint32_t version = 0;
    double hdr[4];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    if (!in || std::string(magic, 4) != std::string(kMagic, 4) || version != kVersion) return nullptr;
    const int N = grid->size();
    if (hdr[0] != k || hdr[1] != N || hdr[2] != grid->R() || hdr[3] != grid->map_param()) return nullptr;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(N, N);
    in.read(reinterpret_cast<char*>(rm.data()), std::streamsize(sizeof(double) * rm.size()));
    if (!in) return nullptr;
    auto p = std::shared_ptr<HankelPlan>(new HankelPlan());
    p->k_ = k;
    p->r_ = grid;
    p->rho_ = grid;
    p->K_ = rm;
    return p;
}

PlanPtr plan_for_order(int k, const HankelPlan& like) {
    static std::mutex mu;
    static std::map<std::tuple<int, const RadialGrid*, const RadialGrid*>, PlanPtr> memo;
    k = std::abs(k);
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k, like.r_grid().get(), like.rho_grid().get());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto p = HankelPlan::create(k, like.r_grid(), like.rho_grid());
    memo.emplace(key, p);
    return p;
}

namespace {

ModeField transform(const HankelPlan& plan, const ModeField& f, bool warn) {
    if (std::abs(f.k) != plan.k())
        throw std::invalid_argument("hankel_transform: field mode does not match plan order");
    if (!f.grid->same_as(*plan.r_grid()))
        throw std::invalid_argument("hankel_transform: field is not on the plan grid");
    const double peak = f.values.cwiseAbs().maxCoeff();
    const double last = f.values.row(f.nr() - 1).cwiseAbs().maxCoeff();
    if (warn && peak > 0.0 && last > 1e-10 * peak)
        std::cerr << "warning: hankel_transform input has not decayed at r = " << f.grid->nodes()[f.nr() - 1]
                  << " (" << last / peak << " of peak)\n";
    Eigen::MatrixXcd v = plan.kernel().cast<cplx>() * f.values;
    v *= sign_for_mode(f.k);
    return ModeField(f.k, plan.rho_grid(), f.axial, std::move(v));
}

}  // namespace

ModeField hankel_transform(const HankelPlan& plan, const ModeField& f) { return transform(plan, f, true); }

double symbol_identity_residual(const HankelPlan& plan, const ModeField& f, int n, int i) {
    if (n == 0) return 0.0;
    const auto g = apply_bessel_op(BesselOpSpec::mixed(f.k, n, i), f);
    const auto lhs = transform(*plan_for_order(g.k, plan), g, false);
    auto rhs = hankel_transform(plan, f);
    const auto& rho = plan.rho_grid()->nodes();
    const double sgn = ((n - i) % 2) ? -1.0 : 1.0;
    for (int a = 0; a < rhs.nr(); ++a) rhs.values.row(a) *= sgn * std::pow(rho[a], n);
    const double den = l21_norm(rhs);
    const double num = l21_norm(lhs - rhs.like(rhs.values, lhs.k));
    return den > 0.0 ? num / den : num;
}

double dual_symbol_identity_residual(const HankelPlan& plan, const ModeField& f, int n, int i) {
    if (n == 0) return 0.0;
    const auto h = hankel_transform(plan, f);
    const auto lhs = apply_bessel_op(BesselOpSpec::mixed(f.k, n, i), h);
    ModeField rnf = f.like(f.values, f.k + n - 2 * i);
    const auto& r = f.grid->nodes();
    for (int a = 0; a < rnf.nr(); ++a) rnf.values.row(a) *= std::pow(r[a], n);
    auto rhs = transform(*plan_for_order(rnf.k, plan), rnf, false);
    const double sgn = ((n - i) % 2) ? -1.0 : 1.0;
    rhs.values *= sgn;
    const double den = l21_norm(rnf);
    const double num = l21_norm(lhs - rhs);
    return den > 0.0 ? num / den : num;
}

double hankel_space_norm(const HankelPlan& plan, const ModeField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("hankel_space_norm: negative order");
    auto h = hankel_transform(plan, f);
    const auto& rho = plan.rho_grid()->nodes();
    for (int a = 0; a < h.nr(); ++a) h.values.row(a) *= std::pow(1.0 + rho[a] * rho[a], 0.5 * s);
    return l21_norm(h);
}

double hankel_symbol_norm(const HankelPlan& plan, const ModeField& f, int m) {
    if (m < 0) throw std::invalid_argument("hankel_symbol_norm: negative order");
    auto h = hankel_transform(plan, f);
    const auto& rho = plan.rho_grid()->nodes();
    for (int a = 0; a < h.nr(); ++a) {
        double sym = 0.0, q = 1.0;
        for (int n = 0; n <= m; ++n, q *= rho[a] * rho[a]) sym += q;
        h.values.row(a) *= std::sqrt(sym);
    }
    return l21_norm(h);
}

double triangle_kernel(double rho, double u, double w) {
    if (!(rho > 0.0) || !(u > 0.0) || !(w > 0.0)) throw std::domain_error("triangle_kernel: arguments must be positive");
    const double a = u * u - (rho - w) * (rho - w);
    const double b = (rho + w) * (rho + w) - u * u;
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return 2.0 / std::numbers::pi / std::sqrt(a * b);
}

double triangle_integral(double rho, double w, const std::function<double(double)>& h, int nodes) {
    if (!(rho > 0.0) || !(w > 0.0)) throw std::domain_error("triangle_integral: arguments must be positive");
    // int D h u du = (1/pi) int_a^b h(sqrt t) ((t-a)(b-t))^{-1/2} dt, Gauss-Chebyshev in t
    const double a = (rho - w) * (rho - w), b = (rho + w) * (rho + w);
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double x = std::cos(std::numbers::pi * (j + 0.5) / nodes);
        s += h(std::sqrt(0.5 * (a + b) + 0.5 * (b - a) * x));
    }
    return s / nodes;
}

double product_identity_residual(const HankelPlan& plan_k, const HankelPlan& plan_l,
                                 const ModeField& f, const ModeField& g, int quad_nodes, double rho_max) {
    if (f.has_axial() || g.has_axial())
        throw std::invalid_argument("product_identity_residual: z-independent fields only");
    const int k = f.k, l = g.k;
    const auto Hf = hankel_transform(plan_k, f);
    const auto Hg = hankel_transform(plan_l, g);
    const auto prod = pointwise(f, g);
    const auto Hfg = transform(*plan_for_order(k + l, plan_k), prod, false);
    const auto& grid = plan_k.rho_grid();
    const double top = grid->nodes()[grid->size() - 1];
    const Eigen::VectorXcd hf = Hf.values.col(0), hg = Hg.values.col(0);
    auto eval = [&](const Eigen::VectorXcd& v, double x) -> cplx {
        if (x > top) return 0.0;
        return (grid->interp_row(x) * v)(0);
    };

    const auto rq = gauss_legendre(64, 0.0, rho_max);
    const int half = quad_nodes / 2;
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < rq.x.size(); ++q) {
        const double rho = rq.x[q];
        // w panels split at the kink w = rho
        cplx acc = 0.0;
        for (auto [lo, hi] : {std::pair{0.0, rho}, std::pair{rho, top}}) {
            const auto wr = gauss_legendre(half, lo, hi);
            for (std::size_t j = 0; j < wr.x.size(); ++j) {
                const double w = wr.x[j];
                const cplx gw = eval(hg, w);
                if (gw == 0.0) continue;
                double im = 0.0;
                auto inner = [&](double u, bool imag) {
                    const double cu = std::clamp((rho * rho + w * w - u * u) / (2 * rho * w), -1.0, 1.0);
                    const double cw = std::clamp((rho * rho + u * u - w * w) / (2 * rho * u), -1.0, 1.0);
                    const double ang = std::cos(k * std::acos(cw) - l * std::acos(cu));
                    const cplx fu = eval(hf, u);
                    return ang * (imag ? fu.imag() : fu.real());
                };
                const double re = triangle_integral(rho, w, [&](double u) { return inner(u, false); }, quad_nodes);
                if (Hf.values.imag().cwiseAbs().maxCoeff() > 0.0)
                    im = triangle_integral(rho, w, [&](double u) { return inner(u, true); }, quad_nodes);
                acc += wr.w[j] * w * cplx(re, im) * gw;
            }
        }
        const cplx direct = eval(Hfg.values.col(0), rho);
        num += rq.w[q] * rho * std::norm(acc - direct);
        den += rq.w[q] * rho * std::norm(direct);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace radialfs

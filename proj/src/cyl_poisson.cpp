#include "radialfs/cyl_poisson.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/LU>

#include "radialfs/quadrature.hpp"
#include "radialfs/radial_ops.hpp"
#include "radialfs/spaces.hpp"

namespace radialfs {

namespace {

// Spectral columns below this fraction of the peak cannot change the result.
constexpr double kNegligibleColumn = 1e-17;
constexpr double kMaxPanel = 0.25;

void require_solver_grid(const GridPtr& grid) {
    if (!grid || grid->type() != GridType::Gauss || std::abs(grid->R() - 1.0) > 1e-14)
        throw std::invalid_argument("cylinder solver: radial grid must be a Gauss grid on (0, 1)");
}

// Sub-nodes of the product-integration rule for every target node, and the
// interpolation rows (scaled by rho * weight) mapping grid values onto them.
struct ProductRule {
    std::vector<double> rho;
    std::vector<int> offset;  // size N + 1
    Eigen::MatrixXd interp;   // rho.size() x N
};

void add_panel(double a, double b, const GaussRule& ref, std::vector<double>& x, std::vector<double>& w) {
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (size_t q = 0; q < ref.x.size(); ++q) {
        x.push_back(c + h * ref.x[q]);
        w.push_back(h * ref.w[q]);
    }
}

std::vector<double> breakpoints(double a, double b, double ratio) {
    std::vector<double> out{a};
    double cur = a;
    while (cur < b) {
        double next = std::min({b, cur * ratio, cur + kMaxPanel});
        if (b - next < 1e-3 * (next - cur)) next = b;
        out.push_back(next);
        cur = next;
    }
    return out;
}

ProductRule build_rule(const RadialGrid& grid, const SolverOptions& opt) {
    const GaussRule ref = gauss_legendre(opt.panel_nodes);
    const auto& r = grid.nodes();
    ProductRule rule;
    std::vector<double> w;
    rule.offset.push_back(0);
    for (int i = 0; i < grid.size(); ++i) {
        const int inner = std::max(1, static_cast<int>(std::ceil(r[i] / kMaxPanel)));
        for (int p = 0; p < inner; ++p) add_panel(r[i] * p / inner, r[i] * (p + 1) / inner, ref, rule.rho, w);
        const auto br = breakpoints(r[i], 1.0, opt.panel_ratio);
        for (size_t p = 0; p + 1 < br.size(); ++p) add_panel(br[p], br[p + 1], ref, rule.rho, w);
        rule.offset.push_back(static_cast<int>(rule.rho.size()));
    }
    rule.interp = grid.interp_matrix(rule.rho);
    for (size_t q = 0; q < rule.rho.size(); ++q) rule.interp.row(q) *= rule.rho[q] * w[q];
    return rule;
}

struct KernelEntry {
    Eigen::MatrixXd A;
    double condition = 0.0;
};

using RuleKey = std::tuple<int, double, int, double>;
using KernelKey = std::tuple<int, double, int, int, double>;

std::mutex cache_mutex;
std::map<RuleKey, std::shared_ptr<const ProductRule>> rule_cache;
std::map<KernelKey, std::shared_ptr<const KernelEntry>> kernel_cache;
constexpr size_t kKernelCacheLimit = 4096;

std::shared_ptr<const ProductRule> product_rule(const RadialGrid& grid, const SolverOptions& opt) {
    const RuleKey key{grid.size(), grid.R(), opt.panel_nodes, opt.panel_ratio};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = rule_cache.find(key); it != rule_cache.end()) return it->second;
    }
    auto rule = std::make_shared<const ProductRule>(build_rule(grid, opt));
    std::lock_guard lock(cache_mutex);
    rule_cache.emplace(key, rule);
    return rule;
}

// Dense matrix of u(r_i) = int_0^1 G(r_i, rho) f(rho) rho drho acting on grid values.
std::shared_ptr<const KernelEntry> kernel_matrix(int k, double s, const RadialGrid& grid, const SolverOptions& opt) {
    const KernelKey key{k, s, grid.size(), opt.panel_nodes, opt.panel_ratio};
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = kernel_cache.find(key); it != kernel_cache.end()) return it->second;
    }
    const auto rule = product_rule(grid, opt);
    const GreensKernel G(k, s);
    const int n = grid.size();
    auto entry = std::make_shared<KernelEntry>();
    entry->A.resize(n, n);
    for (int i = 0; i < n; ++i) {
        const int a = rule->offset[i], len = rule->offset[i + 1] - a;
        const double ri = grid.nodes()[i];
        const Eigen::MatrixXd g = G.matrix(std::span<const double>(&ri, 1),
                                           std::span<const double>(rule->rho.data() + a, len));
        entry->A.row(i) = g.row(0) * rule->interp.middleRows(a, len);
    }
    entry->condition = 1.0 / Eigen::PartialPivLU<Eigen::MatrixXd>(entry->A).rcond();
    std::lock_guard lock(cache_mutex);
    if (kernel_cache.size() > kKernelCacheLimit) kernel_cache.clear();
    kernel_cache.emplace(key, entry);
    return entry;
}

void check_resolution(const Eigen::MatrixXcd& values, const SolverOptions& opt, const char* what) {
    const double frac = top_octave_fraction(values);
    if (frac > opt.top_octave_tol)
        throw ResolutionError(std::string(what) + ": " + std::to_string(frac) +
                              " of the axial spectral energy lies in the top octave");
}

ModeField greens_apply_impl(int k, const ModeField& f, const SolverOptions& opt, std::vector<FrequencyCondition>* cond) {
    require_solver_grid(f.grid);
    if (!f.axial) throw std::invalid_argument("greens_apply: field needs an axial grid");
    check_resolution(f.values, opt, "greens_apply");
    const int order = std::abs(k);
    const AxialGrid ax = *f.axial;
    const Eigen::MatrixXcd F = axial_fft(f.values);
    const double peak = F.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(F.rows(), F.cols());
    for (int j = 0; j < ax.N; ++j) {
        if (F.col(j).cwiseAbs().maxCoeff() <= kNegligibleColumn * peak) continue;
        const double s = std::abs(ax.xi(j));
        const auto K = kernel_matrix(order, s, *f.grid, opt);
        U.col(j) = K->A * F.col(j);
        if (cond && ax.xi(j) >= 0.0) cond->push_back({s, K->condition});
    }
    return f.like(axial_ifft(U), f.k);
}

}  // namespace

nlohmann::json SolveDiagnostics::to_json() const {
    nlohmann::json pf = nlohmann::json::array();
    for (const auto& c : per_frequency_condition) pf.push_back({{"xi", c.xi}, {"condition", c.condition}});
    return {{"boundary_defect", boundary_defect},
            {"interior_residual", interior_residual},
            {"h2_norm", h2_norm},
            {"per_frequency_condition", pf}};
}

double top_octave_fraction(const Eigen::MatrixXcd& values) {
    const int n = static_cast<int>(values.cols());
    if (n < 4) return 0.0;
    const Eigen::MatrixXcd F = axial_fft(values);
    double total = 0.0, top = 0.0;
    for (int j = 0; j < n; ++j) {
        const int m = std::min(j, n - j);
        const double e = F.col(j).squaredNorm();
        total += e;
        if (4 * m > n) top += e;
    }
    return total > 0.0 ? top / total : 0.0;
}

ModeField greens_apply(int k, const ModeField& f, const SolverOptions& opt) {
    return greens_apply_impl(k, f, opt, nullptr);
}

ModeField boundary_apply(int k, const Eigen::VectorXcd& g, GridPtr grid, const AxialGrid& axial,
                         const SolverOptions& opt) {
    require_solver_grid(grid);
    if (g.size() != axial.N) throw std::invalid_argument("boundary_apply: trace length does not match axial grid");
    const Eigen::MatrixXcd row = g.transpose();
    check_resolution(row, opt, "boundary_apply");
    const Eigen::MatrixXcd gh = axial_fft(row);
    const int n = grid->size();
    Eigen::MatrixXcd U(n, axial.N);
    for (int j = 0; j < axial.N; ++j) {
        const GreensKernel G(std::abs(k), axial.xi(j));
        for (int i = 0; i < n; ++i) U(i, j) = G.boundary(grid->nodes()[i]) * gh(0, j);
    }
    return ModeField(k, std::move(grid), axial, axial_ifft(U));
}

CylSolution solve(int k, const ModeField& f, const Eigen::VectorXcd& g, const SolverOptions& opt) {
    if (f.k != k) throw std::invalid_argument("solve: source field has a different mode");
    CylSolution sol;
    auto& d = sol.diagnostics;
    const ModeField gu = greens_apply_impl(k, f, opt, &d.per_frequency_condition);
    sol.u = gu + boundary_apply(k, g, f.grid, *f.axial, opt);

    const Eigen::VectorXcd trace = trace_boundary(sol.u);
    const double gn = g.norm();
    d.boundary_defect = gn > 0.0 ? (trace - g).norm() / gn : trace.norm() * std::sqrt(f.axial->dz());

    const ModeField lap = apply_bessel_op(BesselOpSpec::mixed(k, 2, 1), sol.u);
    const ModeField res = f.like(lap.values + axial_derivative(sol.u.values, *f.axial, 2) - f.values, k);
    const double fn = l21_norm(f);
    const double un = l21_norm(sol.u);
    d.interior_residual = l21_norm(res) / (fn > 0.0 ? fn : std::max(un, 1e-300));
    d.h2_norm = sobolev_norm(sol.u, 2).total;
    return sol;
}

double weak_form_residual(const ModeField& u, const ModeField& f, const ModeField& phi) {
    if (!u.axial || !(u.grid->same_as(*phi.grid)) || !(u.grid->same_as(*f.grid)))
        throw std::invalid_argument("weak_form_residual: fields must share grids");
    const int k = u.k;
    const auto& w = u.grid->weights();
    const double dz = u.axial->dz();
    auto inner = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        cplx acc = 0.0;
        for (int i = 0; i < a.rows(); ++i) acc += w[i] * a.row(i).dot(b.row(i));
        return acc * dz;
    };
    auto apply = [](const BesselOpSpec& s, const ModeField& x) { return apply_bessel_op(s, x).values; };
    const cplx t1 = 0.5 * inner(apply(BesselOpSpec::mixed(k, 1, 1), phi), apply(BesselOpSpec::mixed(k, 1, 1), u));
    const cplx t2 = 0.5 * inner(apply(BesselOpSpec::mixed(k, 1, 0), phi), apply(BesselOpSpec::mixed(k, 1, 0), u));
    const cplx t3 = inner(axial_derivative(phi.values, *phi.axial, 1), axial_derivative(u.values, *u.axial, 1));
    const cplx t4 = inner(phi.values, f.values);
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
    return scale > 0.0 ? std::abs(t1 + t2 + t3 + t4) / scale : 0.0;
}

double poincare_ratio(const ModeField& w) {
    const double num = std::pow(l21_norm(w), 2);
    const double den = std::pow(l21_norm(apply_bessel_op(BesselOpSpec::mixed(w.k, 1, 1), w)), 2) +
                       std::pow(l21_norm(apply_bessel_op(BesselOpSpec::mixed(w.k, 1, 0), w)), 2);
    if (den == 0.0) throw std::domain_error("poincare_ratio: field has no radial derivative");
    return num / den;
}

double axial_sobolev_norm(const Eigen::VectorXcd& g, const AxialGrid& axial, double s) {
    if (g.size() != axial.N) throw std::invalid_argument("axial_sobolev_norm: length does not match axial grid");
    const Eigen::MatrixXcd gh = axial_fft(Eigen::MatrixXcd(g.transpose()));
    double acc = 0.0;
    for (int j = 0; j < axial.N; ++j) acc += std::pow(1.0 + axial.xi(j) * axial.xi(j), s) * std::norm(gh(0, j));
    return std::sqrt(acc * axial.dz() / axial.N);
}

}  // namespace radialfs

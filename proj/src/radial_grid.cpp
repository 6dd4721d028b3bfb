#include "radialfs/radial_grid.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "radialfs/quadrature.hpp"

namespace radialfs {

std::string to_string(GridType t) { return t == GridType::Gauss ? "gauss" : "mapped"; }

GridType grid_type_from_string(const std::string& s) {
    if (s == "gauss") return GridType::Gauss;
    if (s == "mapped") return GridType::Mapped;
    throw std::invalid_argument("unknown grid type: " + s);
}

std::shared_ptr<const RadialGrid> RadialGrid::gauss(int n, double R) {
    if (n < 2) throw std::invalid_argument("RadialGrid: need at least 2 nodes");
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("RadialGrid: R must be positive and finite");
    auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
    g->type_ = GridType::Gauss;
    g->extent_ = R;
    GaussRule rule = gauss_legendre(n);
    g->build_from_reference(rule.x, rule.w);
    return g;
}

std::shared_ptr<const RadialGrid> RadialGrid::mapped(int n, double c) {
    if (n < 2) throw std::invalid_argument("RadialGrid: need at least 2 nodes");
    if (!(c > 0.0)) throw std::invalid_argument("RadialGrid: map parameter must be positive");
    auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
    g->type_ = GridType::Mapped;
    g->extent_ = c;
    g->c_ = c;
    GaussRule rule = gauss_legendre(n);
    g->build_from_reference(rule.x, rule.w);
    return g;
}

double RadialGrid::R() const {
    return type_ == GridType::Gauss ? extent_ : std::numeric_limits<double>::infinity();
}

void RadialGrid::build_from_reference(const std::vector<double>& x, const std::vector<double>& wx) {
    const int n = static_cast<int>(x.size());
    r_.resize(n);
    w_.resize(n);
    t_.resize(n);
    bary_.resize(n);
    Eigen::VectorXd drdt(n);
    for (int j = 0; j < n; ++j) {
        const double t = 0.5 * (x[j] + 1.0);
        t_[j] = t;
        // Legendre barycentric weights (-1)^j sqrt((1-x^2) w)
        bary_[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - x[j] * x[j]) * wx[j]);
        if (type_ == GridType::Gauss) {
            r_[j] = extent_ * t;
            drdt[j] = extent_;
        } else {
            r_[j] = c_ * t / (1.0 - t);
            drdt[j] = c_ / ((1.0 - t) * (1.0 - t));
        }
        w_[j] = 0.5 * wx[j] * drdt[j] * r_[j];
    }
    // differentiation in t, then chain rule
    d_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = (bary_[j] / bary_[i]) / (t_[i] - t_[j]);
            d_(i, j) = v;
            diag -= v;
        }
        d_(i, i) = diag;
    }
    for (int i = 0; i < n; ++i) d_.row(i) /= drdt[i];
}

Eigen::RowVectorXd RadialGrid::interp_row(double r) const {
    const int n = size();
    double t;
    if (type_ == GridType::Gauss) {
        t = r / extent_;
    } else {
        t = std::isinf(r) ? 1.0 : r / (r + c_);
    }
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (t == t_[j]) {
            row[j] = 1.0;
            return row;
        }
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
        const double v = bary_[j] / (t - t_[j]);
        row[j] = v;
        denom += v;
    }
    return row / denom;
}

Eigen::MatrixXd RadialGrid::interp_matrix(const std::vector<double>& pts) const {
    Eigen::MatrixXd m(pts.size(), size());
    for (size_t i = 0; i < pts.size(); ++i) m.row(i) = interp_row(pts[i]);
    return m;
}

bool RadialGrid::same_as(const RadialGrid& o) const {
    return type_ == o.type_ && size() == o.size() && extent_ == o.extent_;
}

double AxialGrid::xi(int j) const {
    const int m = (j <= N / 2) ? j : j - N;
    return std::numbers::pi * m / L;
}

ModeField::ModeField(int k_, GridPtr grid_, std::optional<AxialGrid> axial_)
    : k(k_), grid(std::move(grid_)), axial(axial_) {
    values = Eigen::MatrixXcd::Zero(grid->size(), axial ? axial->N : 1);
}

ModeField::ModeField(int k_, GridPtr grid_, std::optional<AxialGrid> axial_, Eigen::MatrixXcd v)
    : k(k_), grid(std::move(grid_)), axial(axial_), values(std::move(v)) {
    if (values.rows() != grid->size() || values.cols() != (axial ? axial->N : 1))
        throw std::invalid_argument("ModeField: value shape does not match grids");
}

ModeField ModeField::sample(int k, GridPtr grid, std::optional<AxialGrid> axial,
                            const std::function<cplx(double, double)>& f) {
    ModeField out(k, grid, axial);
    const auto& r = grid->nodes();
    for (int j = 0; j < out.nz(); ++j) {
        const double z = axial ? axial->z(j) : 0.0;
        for (int i = 0; i < out.nr(); ++i) out.values(i, j) = f(r[i], z);
    }
    return out;
}

ModeField ModeField::sample_radial(int k, GridPtr grid, const std::function<double(double)>& f) {
    return sample(k, std::move(grid), std::nullopt, [&](double r, double) { return cplx(f(r), 0.0); });
}

ModeField ModeField::like(Eigen::MatrixXcd v, int mode) const {
    return ModeField(mode, grid, axial, std::move(v));
}

namespace {
void check_compatible(const ModeField& a, const ModeField& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        throw std::invalid_argument("ModeField: incompatible shapes");
}
}  // namespace

ModeField operator+(const ModeField& a, const ModeField& b) {
    check_compatible(a, b);
    return a.like(a.values + b.values, a.k);
}

ModeField operator-(const ModeField& a, const ModeField& b) {
    check_compatible(a, b);
    return a.like(a.values - b.values, a.k);
}

ModeField operator*(cplx s, const ModeField& a) { return a.like(s * a.values, a.k); }

ModeField pointwise(const ModeField& a, const ModeField& b) {
    check_compatible(a, b);
    return a.like(a.values.cwiseProduct(b.values), a.k + b.k);
}

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

Eigen::MatrixXcd axial_dft(const Eigen::MatrixXcd& v, int sign) {
    const int nr = static_cast<int>(v.rows()), nz = static_cast<int>(v.cols());
    Eigen::MatrixXcd out(nr, nz);
    if (nz == 0 || nr == 0) return out;
    Eigen::MatrixXcd in = v;
    auto* ip = reinterpret_cast<fftw_complex*>(in.data());
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        int n[1] = {nz};
        plan = fftw_plan_many_dft(1, n, nr, ip, nullptr, nr, 1, op, nullptr, nr, 1, sign,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd axial_fft(const Eigen::MatrixXcd& v) { return axial_dft(v, FFTW_FORWARD); }

Eigen::MatrixXcd axial_ifft(const Eigen::MatrixXcd& v) {
    return axial_dft(v, FFTW_BACKWARD) / static_cast<double>(v.cols());
}

Eigen::MatrixXcd axial_derivative(const Eigen::MatrixXcd& v, const AxialGrid& ax, int order) {
    if (order == 0) return v;
    if (v.cols() != ax.N) throw std::invalid_argument("axial_derivative: column count differs from axial grid");
    Eigen::MatrixXcd h = axial_fft(v);
    for (int j = 0; j < ax.N; ++j) {
        cplx mult;
        if (ax.N % 2 == 0 && j == ax.N / 2 && order % 2 == 1) {
            mult = 0.0;
        } else {
            mult = std::pow(cplx(0.0, ax.xi(j)), order);
        }
        h.col(j) *= mult;
    }
    return axial_ifft(h);
}

}  // namespace radialfs

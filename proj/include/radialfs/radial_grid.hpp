#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace radialfs {

using cplx = std::complex<double>;

enum class GridType { Gauss, Mapped };

std::string to_string(GridType t);
GridType grid_type_from_string(const std::string& s);

// Quadrature nodes and weights for \int f(r) r dr on (0, R), or on (0, inf)
// through r = c t / (1 - t).
class RadialGrid {
public:
    static std::shared_ptr<const RadialGrid> gauss(int n, double R);
    static std::shared_ptr<const RadialGrid> mapped(int n, double c = 5.0);

    GridType type() const { return type_; }
    int size() const { return static_cast<int>(r_.size()); }
    double R() const;  // +inf for the mapped grid
    double map_param() const { return c_; }
    double extent() const { return extent_; }  // R, or c for the mapped grid

    const Eigen::VectorXd& nodes() const { return r_; }
    const Eigen::VectorXd& weights() const { return w_; }
    const Eigen::MatrixXd& diff() const { return d_; }

    // Row of barycentric interpolation weights evaluating the node polynomial at r.
    Eigen::RowVectorXd interp_row(double r) const;
    Eigen::MatrixXd interp_matrix(const std::vector<double>& pts) const;

    bool same_as(const RadialGrid& o) const;

private:
    RadialGrid() = default;
    void build_from_reference(const std::vector<double>& t, const std::vector<double>& wt);

    GridType type_ = GridType::Gauss;
    double extent_ = 1.0;
    double c_ = 0.0;
    Eigen::VectorXd r_, w_, t_, bary_;
    Eigen::MatrixXd d_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Uniform periodic grid z_j = -L + j 2L/N on [-L, L).
struct AxialGrid {
    double L = 10.0;
    int N = 256;

    double dz() const { return 2.0 * L / N; }
    double z(int j) const { return -L + j * dz(); }
    // angular frequency of FFT bin j (FFT ordering, Nyquist bin positive)
    double xi(int j) const;
    bool operator==(const AxialGrid& o) const { return L == o.L && N == o.N; }
};

// Radial coefficient f_k sampled on grid x axial grid (one column if z-independent).
class ModeField {
public:
    ModeField() = default;
    ModeField(int k, GridPtr grid, std::optional<AxialGrid> axial);
    ModeField(int k, GridPtr grid, std::optional<AxialGrid> axial, Eigen::MatrixXcd values);

    static ModeField sample(int k, GridPtr grid, std::optional<AxialGrid> axial,
                            const std::function<cplx(double r, double z)>& f);
    static ModeField sample_radial(int k, GridPtr grid, const std::function<double(double r)>& f);

    int k = 0;
    GridPtr grid;
    std::optional<AxialGrid> axial;
    Eigen::MatrixXcd values;

    int nr() const { return static_cast<int>(values.rows()); }
    int nz() const { return static_cast<int>(values.cols()); }
    bool has_axial() const { return axial.has_value(); }

    ModeField like(Eigen::MatrixXcd v, int mode) const;
};

ModeField operator+(const ModeField& a, const ModeField& b);
ModeField operator-(const ModeField& a, const ModeField& b);
ModeField operator*(cplx s, const ModeField& a);
// pointwise product; mode k + q
ModeField pointwise(const ModeField& a, const ModeField& b);

// Axial FFTs along each row (radial node) of a radial x axial matrix.
Eigen::MatrixXcd axial_fft(const Eigen::MatrixXcd& v);
Eigen::MatrixXcd axial_ifft(const Eigen::MatrixXcd& v);
// Spectral derivative of the given order in z.
Eigen::MatrixXcd axial_derivative(const Eigen::MatrixXcd& v, const AxialGrid& ax, int order);

}  // namespace radialfs

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "radialfs/radial_grid.hpp"

namespace radialfs {

// Malformed or inconsistent field/trace input.
class FieldFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {k, grid: {type, N, R, map_param}, axial: {L, N} | null, values: [[re, im], ...]}
// values are stored radial-major: index = i * max(N_z, 1) + j.
nlohmann::json field_to_json(const ModeField& f);
ModeField field_from_json(const nlohmann::json& j);

// One "r,z,re,im" row per sample; z = 0 for z-independent fields.
std::string field_to_csv(const ModeField& f);

ModeField read_field(const std::string& path);
// CSV when the path ends in .csv, JSON otherwise.
void write_field(const ModeField& f, const std::string& path);

// Boundary data g(z): JSON {axial: {L, N}, values: [[re, im], ...]}, or CSV rows
// "z,re,im" on a uniform periodic grid starting at z = -L.
struct TraceFile {
    AxialGrid axial;
    Eigen::VectorXcd values;
};
TraceFile read_trace(const std::string& path);

// Trigonometric interpolant of samples on `from`, evaluated on the nodes of `to`.
// The target nodes must lie inside [-from.L, from.L].
Eigen::VectorXcd resample_axial(const Eigen::VectorXcd& v, const AxialGrid& from, const AxialGrid& to);

// f moved onto (grid, axial): barycentric interpolation in r (zero beyond a finite
// source extent), trigonometric interpolation in z, and z-independent data
// repeated along the target axial grid.
ModeField resample(const ModeField& f, const GridPtr& grid, const std::optional<AxialGrid>& axial);

}  // namespace radialfs

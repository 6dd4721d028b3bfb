#include "radialfs/field_io.hpp"

#include <cmath>
#include <fstream>
#include <cctype>
#include <sstream>

namespace radialfs {

namespace {

nlohmann::json complex_array(const Eigen::MatrixXcd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.rows(); ++i)
        for (int j = 0; j < v.cols(); ++j) arr.push_back({v(i, j).real(), v(i, j).imag()});
    return arr;
}

cplx parse_complex(const nlohmann::json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw FieldFormatError("each value must be a number or a [re, im] pair");
    return {e[0].get<double>(), e[1].get<double>()};
}

double positive(const nlohmann::json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_number()) throw FieldFormatError(std::string(where) + "." + key + " missing");
    const double v = j[key].get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw FieldFormatError(std::string(where) + "." + key + " must be positive");
    return v;
}

int positive_int(const nlohmann::json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw FieldFormatError(std::string(where) + "." + key + " must be an integer");
    const int v = j[key].get<int>();
    if (v <= 0) throw FieldFormatError(std::string(where) + "." + key + " must be positive");
    return v;
}

AxialGrid axial_from_json(const nlohmann::json& a) {
    if (!a.is_object()) throw FieldFormatError("axial must be an object or null");
    return {positive(a, "L", "axial"), positive_int(a, "N", "axial")};
}

nlohmann::json axial_to_json(const AxialGrid& a) { return {{"L", a.L}, {"N", a.N}}; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldFormatError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::json parse_json(const std::string& text, const std::string& path) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FieldFormatError(path + ": " + e.what());
    }
}

}  // namespace

nlohmann::json field_to_json(const ModeField& f) {
    nlohmann::json grid{{"type", to_string(f.grid->type())}, {"N", f.grid->size()}};
    if (f.grid->type() == GridType::Gauss) {
        grid["R"] = f.grid->R();
        grid["map_param"] = nullptr;
    } else {
        grid["R"] = nullptr;
        grid["map_param"] = f.grid->map_param();
    }
    return {{"k", f.k},
            {"grid", grid},
            {"axial", f.axial ? axial_to_json(*f.axial) : nlohmann::json(nullptr)},
            {"values", complex_array(f.values)}};
}

ModeField field_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FieldFormatError("field must be a JSON object");
    if (!j.contains("k") || !j["k"].is_number_integer()) throw FieldFormatError("k must be an integer");
    if (!j.contains("grid") || !j["grid"].is_object()) throw FieldFormatError("grid missing");
    const auto& g = j["grid"];
    if (!g.contains("type") || !g["type"].is_string()) throw FieldFormatError("grid.type missing");
    GridType type;
    try {
        type = grid_type_from_string(g["type"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FieldFormatError(e.what());
    }
    const int n = positive_int(g, "N", "grid");
    const GridPtr grid = type == GridType::Gauss ? RadialGrid::gauss(n, positive(g, "R", "grid"))
                                                 : RadialGrid::mapped(n, positive(g, "map_param", "grid"));
    std::optional<AxialGrid> axial;
    if (j.contains("axial") && !j["axial"].is_null()) axial = axial_from_json(j["axial"]);

    if (!j.contains("values") || !j["values"].is_array()) throw FieldFormatError("values must be an array");
    const auto& vals = j["values"];
    const int nz = axial ? axial->N : 1;
    if (vals.size() != static_cast<std::size_t>(n) * nz)
        throw FieldFormatError("values has " + std::to_string(vals.size()) + " entries, expected " +
                               std::to_string(static_cast<std::size_t>(n) * nz));
    Eigen::MatrixXcd v(n, nz);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nz; ++c) {
            v(i, c) = parse_complex(vals[static_cast<std::size_t>(i) * nz + c]);
            if (!std::isfinite(v(i, c).real()) || !std::isfinite(v(i, c).imag()))
                throw FieldFormatError("values must be finite");
        }
    return ModeField(j["k"].get<int>(), grid, axial, std::move(v));
}

std::string field_to_csv(const ModeField& f) {
    std::ostringstream out;
    out.precision(17);
    out << "r,z,re,im\n";
    for (int i = 0; i < f.nr(); ++i)
        for (int c = 0; c < f.nz(); ++c) {
            const double z = f.axial ? f.axial->z(c) : 0.0;
            out << f.grid->nodes()[i] << ',' << z << ',' << f.values(i, c).real() << ',' << f.values(i, c).imag() << '\n';
        }
    return out.str();
}

ModeField read_field(const std::string& path) { return field_from_json(parse_json(slurp(path), path)); }

void write_field(const ModeField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (ends_with(path, ".csv"))
        out << field_to_csv(f);
    else
        out << field_to_json(f).dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

TraceFile read_trace(const std::string& path) {
    const std::string text = slurp(path);
    TraceFile t;
    if (!ends_with(path, ".csv")) {
        const auto j = parse_json(text, path);
        if (!j.is_object() || !j.contains("axial")) throw FieldFormatError("trace needs an axial grid");
        t.axial = axial_from_json(j["axial"]);
        if (!j.contains("values") || !j["values"].is_array() || j["values"].size() != static_cast<std::size_t>(t.axial.N))
            throw FieldFormatError("trace values must have axial.N entries");
        t.values.resize(t.axial.N);
        for (int c = 0; c < t.axial.N; ++c) t.values[c] = parse_complex(j["values"][c]);
        return t;
    }
    std::istringstream in(text);
    std::string line;
    std::vector<double> z;
    std::vector<cplx> v;
    while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '+' ||
                              line[0] == '.'))
            continue;  // header or blank
        std::istringstream row(line);
        double a, b, c = 0.0;
        char sep;
        if (!(row >> a >> sep >> b)) throw FieldFormatError("bad trace row: " + line);
        if (row >> sep) row >> c;
        z.push_back(a);
        v.emplace_back(b, c);
    }
    if (z.size() < 2) throw FieldFormatError("trace needs at least two samples");
    const double dz = z[1] - z[0];
    for (std::size_t i = 1; i < z.size(); ++i)
        if (std::abs(z[i] - z[i - 1] - dz) > 1e-9 * std::max(1.0, std::abs(dz)))
            throw FieldFormatError("trace z values must be uniformly spaced");
    t.axial = AxialGrid{-z[0], static_cast<int>(z.size())};
    if (!(dz > 0.0) || std::abs(t.axial.dz() - dz) > 1e-9 * dz)
        throw FieldFormatError("trace z values must cover [-L, L) with z_0 = -L");
    t.values = Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
    return t;
}

Eigen::VectorXcd resample_axial(const Eigen::VectorXcd& v, const AxialGrid& from, const AxialGrid& to) {
    if (from == to) return v;
    const int n = from.N;
    const Eigen::VectorXcd c = axial_fft(v.transpose()).transpose() / double(n);
    Eigen::VectorXcd out(to.N);
    for (int j = 0; j < to.N; ++j) {
        const double z = to.z(j);
        if (z < -from.L - 1e-12 || z > from.L + 1e-12)
            throw FieldFormatError("target axial grid extends beyond the data");
        cplx s = 0.0;
        for (int m = 0; m < n; ++m) {
            const double arg = from.xi(m) * (z + from.L);
            // the Nyquist mode is split evenly between +-xi so real data stay real
            if (n % 2 == 0 && m == n / 2)
                s += c[m] * std::cos(arg);
            else
                s += c[m] * std::polar(1.0, arg);
        }
        out[j] = s;
    }
    return out;
}

ModeField resample(const ModeField& f, const GridPtr& grid, const std::optional<AxialGrid>& axial) {
    Eigen::MatrixXcd radial;
    if (f.grid->same_as(*grid)) {
        radial = f.values;
    } else {
        const double extent = f.grid->R();
        const auto& r = grid->nodes();
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(grid->size(), f.grid->size());
        for (int i = 0; i < grid->size(); ++i)
            if (r[i] <= extent) P.row(i) = f.grid->interp_row(r[i]);
        radial = P * f.values;
    }
    if (!axial) {
        if (f.axial) throw FieldFormatError("cannot drop the axial dependence of a field");
        return ModeField(f.k, grid, std::nullopt, std::move(radial));
    }
    Eigen::MatrixXcd out(grid->size(), axial->N);
    if (!f.axial) {
        out = radial.col(0).replicate(1, axial->N);
    } else {
        for (int i = 0; i < grid->size(); ++i)
            out.row(i) = resample_axial(radial.row(i).transpose(), *f.axial, *axial).transpose();
    }
    return ModeField(f.k, grid, axial, std::move(out));
}

}  // namespace radialfs

// radialfs command-line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or malformed input,
// 3 Hankel plan validation failure, 4 unresolved solver input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "radialfs/cyl_poisson.hpp"
#include "radialfs/field_io.hpp"
#include "radialfs/hankel.hpp"
#include "radialfs/spaces.hpp"
#include "radialfs/verify.hpp"

using namespace radialfs;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kUsage = 2, kPlanFail = 3, kResolution = 4;
constexpr double kMaxBoundaryDefect = 1e-4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const nlohmann::json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << '\n';
}

struct TransformArgs {
    std::optional<int> k;
    int size = HankelPlan::default_size;
    double extent = HankelPlan::default_extent;
    bool inverse = false;
    std::string in, out;
};

int cmd_transform(const TransformArgs& a) {
    if (a.k && *a.k < 0) throw UsageError("--k must be non-negative; a mode -k field is transformed with order k");
    if (a.size <= 0 || !(a.extent > 0.0)) throw UsageError("--size and --extent must be positive");
    const ModeField f = read_field(a.in);
    const int k = a.k.value_or(std::abs(f.k));
    if (std::abs(f.k) != k) throw UsageError("field mode " + std::to_string(f.k) + " does not match --k " + std::to_string(k));

    const PlanPtr plan = HankelPlan::create(k, a.size, a.extent);
    const PlanValidation v = plan->validate();
    if (!v.pass) {
        std::cerr << "plan validation failed: round_trip " << v.round_trip << ", parseval " << v.parseval << '\n';
        return kPlanFail;
    }
    // H_k is its own inverse, so --inverse selects the same map
    const ModeField on_plan = resample(f, plan->r_grid(), f.axial);
    write_field(hankel_transform(*plan, on_plan), a.out);
    return kOk;
}

struct SolveArgs {
    int k = 0;
    std::string f, g, out, diagnostics;
    int nr = 64, nz = 256;
    double L = 10.0;
    int panel_nodes = SolverOptions{}.panel_nodes;
};

int cmd_solve(const SolveArgs& a) {
    if (a.nr < 4 || a.nz < 2 || !(a.L > 0.0)) throw UsageError("--nr >= 4, --nz >= 2 and --L > 0 are required");
    const GridPtr grid = RadialGrid::gauss(a.nr, 1.0);
    const AxialGrid ax{a.L, a.nz};

    ModeField f(a.k, grid, ax, Eigen::MatrixXcd::Zero(a.nr, a.nz));
    if (!a.f.empty()) {
        const ModeField src = read_field(a.f);
        if (src.k != a.k) throw UsageError("source mode " + std::to_string(src.k) + " does not match --k");
        f = resample(src, grid, ax);
    }
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(a.nz);
    if (!a.g.empty()) {
        const TraceFile t = read_trace(a.g);
        g = resample_axial(t.values, t.axial, ax);
    }

    SolverOptions opt;
    opt.panel_nodes = a.panel_nodes;
    CylSolution sol;
    try {
        sol = solve(a.k, f, g, opt);
    } catch (const ResolutionError& e) {
        std::cerr << "unresolved input: " << e.what() << '\n';
        return kResolution;
    }
    if (!a.out.empty()) write_field(sol.u, a.out);
    const nlohmann::json diag = sol.diagnostics.to_json();
    emit(diag, a.diagnostics);
    if (!(sol.diagnostics.boundary_defect <= kMaxBoundaryDefect)) {
        std::cerr << "boundary defect " << sol.diagnostics.boundary_defect << " exceeds " << kMaxBoundaryDefect << '\n';
        return kResolution;
    }
    return kOk;
}

int cmd_verify(const std::string& suite, const std::string& out) {
    SuiteReport rep;
    try {
        rep = run_suite(suite);
    } catch (const UnknownSuiteError& e) {
        throw UsageError(e.what());
    }
    emit(rep.to_json(), out);
    return rep.pass() ? kOk : kVerifyFail;
}

int cmd_norm(const std::string& in, int m, const std::string& out) {
    if (m < 0) throw UsageError("--m must be non-negative");
    emit(sobolev_norm(read_field(in), m).to_json(), out);
    return kOk;
}

int cmd_classify(const std::string& in, int m, const std::string& space, const std::string& out) {
    if (m < 0) throw UsageError("--m must be non-negative");
    SpaceTag tag;
    try {
        tag = space_tag_from_string(space);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(classify_membership(read_field(in), m, tag).to_json(), out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial function spaces, Hankel transforms and the cylinder Poisson solver"};
    app.require_subcommand(1);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "Hankel transform of a field file");
    transform->add_option("--k", ta.k, "transform order (default: |mode| of the input)");
    transform->add_option("--size", ta.size, "plan size N")->capture_default_str();
    transform->add_option("--extent", ta.extent, "radial truncation R of the plan grid")->capture_default_str();
    transform->add_flag("--inverse", ta.inverse, "inverse transform (the transform is an involution)");
    transform->add_option("--in", ta.in, "input field (JSON)")->required();
    transform->add_option("--out", ta.out, "output field (.json or .csv)")->required();

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Dirichlet problem for Poisson's equation on the unit cylinder");
    solve_cmd->add_option("--k", sa.k, "angular mode")->required();
    solve_cmd->add_option("--f", sa.f, "source field (JSON); zero when omitted");
    solve_cmd->add_option("--g", sa.g, "boundary data on r = 1 (JSON or CSV); zero when omitted");
    solve_cmd->add_option("--nr", sa.nr, "radial Gauss nodes")->capture_default_str();
    solve_cmd->add_option("--nz", sa.nz, "axial nodes")->capture_default_str();
    solve_cmd->add_option("--L", sa.L, "axial half-period")->capture_default_str();
    solve_cmd->add_option("--panel-nodes", sa.panel_nodes, "Gauss nodes per product-integration panel")
        ->capture_default_str();
    solve_cmd->add_option("--out", sa.out, "solution field (.json or .csv)");
    solve_cmd->add_option("--diagnostics", sa.diagnostics, "diagnostics JSON path (default: stdout)");

    std::string suite, verify_out;
    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", suite, "ops, hankel, spaces, solver, specfun or all")->required();
    verify->add_option("--out", verify_out, "report path (default: stdout)");

    std::string norm_in, norm_out;
    int norm_m = 1;
    auto* norm = app.add_subcommand("norm", "mode-k Sobolev norm report of a field");
    norm->add_option("--in", norm_in, "input field (JSON)")->required();
    norm->add_option("--m", norm_m, "Sobolev order")->capture_default_str();
    norm->add_option("--out", norm_out, "report path (default: stdout)");

    std::string cls_in, cls_out, cls_space = "C";
    int cls_m = 1;
    auto* classify = app.add_subcommand("classify", "membership of a sampled field in C^m, C^m_b or S");
    classify->add_option("--in", cls_in, "input field (JSON)")->required();
    classify->add_option("--m", cls_m, "differentiability order")->capture_default_str();
    classify->add_option("--space", cls_space, "C, Cb or S")->capture_default_str();
    classify->add_option("--out", cls_out, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*transform) return cmd_transform(ta);
        if (*solve_cmd) return cmd_solve(sa);
        if (*verify) return cmd_verify(suite, verify_out);
        if (*norm) return cmd_norm(norm_in, norm_m, norm_out);
        if (*classify) return cmd_classify(cls_in, cls_m, cls_space, cls_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const FieldFormatError& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const PlanValidationError& e) {
        std::cerr << "plan validation failed: " << e.what() << '\n';
        return kPlanFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

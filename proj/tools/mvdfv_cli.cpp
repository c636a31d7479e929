// mvdfv: mesh inspection, single solves and convergence studies.
//
// Exit status: 0 success, 1 invalid input (mesh, config, tensor),
// 2 linear solver failure.

#include "mvdfv/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

constexpr int exit_invalid = 1;
constexpr int exit_solver = 2;

struct Options
{
    bool allow_nonacute = false;
    double tol = 0.0;
    double reaction = -1.0;
    std::string tensor;
    unsigned threads = 1;
    bool dump = false;
    bool no_timing = false;
    std::string out;
    std::string export_matrix;
};

void print_quality(const mvd::TriMesh& mesh, const mvd::QualityReport& q)
{
    const std::size_t B = mesh.boundary_nodes.size();
    std::printf("nodes (M_D)        %zu\n", mesh.num_nodes());
    std::printf("triangles          %zu\n", mesh.num_triangles());
    std::printf("boundary nodes     %zu\n", B);
    std::printf("min/max angle      %.1f / %.1f\n", q.min_angle, q.max_angle);
    std::printf("non-acute          %zu\n", q.num_obtuse_or_right);
}

int mesh_info(const std::string& path, const Options& opt)
{
    const mvd::TriMesh mesh = mvd::parse_msh_file(path);
    const mvd::QualityReport q = mvd::validate_acute(mesh);
    print_quality(mesh, q);
    if (!q.is_acute && !opt.allow_nonacute) {
        std::fprintf(stderr, "mesh is not acute; dual quantities need --allow-nonacute\n");
        return exit_invalid;
    }
    const mvd::MvdMesh mvd = mvd::build_mvd(mesh, opt.allow_nonacute);
    std::printf("V-nodes (M_V)      %zu\n", mvd.num_V());
    std::printf("MVD cells (M)      %zu\n", mvd.num_cells());
    std::printf("boundary cells     %zu\n", mvd.num_boundary_cells());
    if (!mvd.dual.outside_circumcenters.empty())
        std::fprintf(stderr, "warning: %zu circumcenters lie outside their triangles\n",
                     mvd.dual.outside_circumcenters.size());
    if (opt.dump)
        mvd::dump_cells(std::cout, mvd);
    return 0;
}

int validate(const std::string& path, const Options& opt)
{
    const mvd::TriMesh mesh = mvd::parse_msh_file(path);
    const mvd::QualityReport q = mvd::validate_acute(mesh);
    if (!q.is_acute && !opt.allow_nonacute) {
        std::printf("%s: not acute (%zu triangles, max angle %.3f)\n", path.c_str(), q.num_obtuse_or_right,
                    q.max_angle);
        return exit_invalid;
    }
    const mvd::MvdMesh mvd = mvd::build_mvd(mesh, opt.allow_nonacute);
    const double area = mvd.domain_area();
    double sd = 0.0, sv = 0.0, ss = 0.0;
    for (double a : mvd.S_D)
        sd += a;
    for (double a : mvd.S_V)
        sv += a;
    for (const auto& c : mvd.cells)
        ss += c.S_star;
    const double worst = std::max({std::abs(sd - area), std::abs(sv - area), std::abs(ss - area)}) / area;
    if (worst > 1e-10) {
        std::printf("%s: control volumes do not tile the domain (relative gap %.3g)\n", path.c_str(), worst);
        return exit_invalid;
    }
    std::printf("%s: ok\n", path.c_str());
    return 0;
}

void apply_overrides(mvd::CaseConfig& c, const Options& opt)
{
    if (opt.tol > 0.0)
        c.tol = opt.tol;
    if (opt.reaction >= 0.0)
        c.reaction = opt.reaction;
    if (!opt.tensor.empty())
        c.tensor = mvd::parse_tensor(opt.tensor);
    c.allow_nonacute = c.allow_nonacute || opt.allow_nonacute;
}

void print_result(const mvd::CaseResult& r)
{
    std::printf("M_D %zu  M_V %zu  M %zu\n", r.M_D, r.M_V, r.M);
    std::printf("eps2_D   %.6e\neps2_V   %.6e\n", r.eps2_D, r.eps2_V);
    std::printf("epsInf_D %.6e\nepsInf_V %.6e\n", r.epsInf_D, r.epsInf_V);
    std::printf("eps_grad %.6e\n", r.eps_grad);
    std::printf("iterations %zu, %.3f s\n", r.iters, r.seconds);
}

int solve(const std::string& path, const Options& opt)
{
    mvd::CaseConfig c = mvd::parse_config_file(path);
    apply_overrides(c, opt);
    if (!opt.out.empty())
        c.out = opt.out;
    if (!opt.export_matrix.empty()) {
        const mvd::TriMesh mesh =
            c.mesh.empty() ? mvd::generate_rectangle_mesh(mvd::Rectangle{}, c.h) : mvd::parse_msh_file(c.mesh);
        const mvd::MvdMesh mvd = mvd::build_mvd(mesh, c.allow_nonacute);
        const auto sys =
            mvd::assemble(mvd::make_problem(mvd, c.tensor, c.reaction, mvd::manufactured_rhs(c.tensor, c.reaction)));
        std::ofstream f(opt.export_matrix);
        mvd::write_matrix_market(f, sys.A);
        if (!f)
            throw mvd::ConfigError("cannot write '" + opt.export_matrix + "'");
    }
    print_result(mvd::run_case(c));
    return 0;
}

std::vector<std::string> sorted_entries(const fs::path& dir, const std::string& ext)
{
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext)
            out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

int convergence(const std::vector<std::string>& inputs, const Options& opt)
{
    std::vector<std::string> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            auto cfg = sorted_entries(in, ".cfg");
            if (cfg.empty())
                cfg = sorted_entries(in, ".msh");
            files.insert(files.end(), cfg.begin(), cfg.end());
        }
        else {
            files.push_back(in);
        }
    }
    std::vector<mvd::CaseConfig> configs;
    for (const auto& f : files) {
        mvd::CaseConfig c;
        if (fs::path(f).extension() == ".msh")
            c.mesh = f;
        else
            c = mvd::parse_config_file(f);
        apply_overrides(c, opt);
        configs.push_back(c);
    }
    const mvd::StudyResult study = mvd::convergence_study(configs, opt.threads);

    FILE* summary = stdout;
    if (opt.out.empty()) {
        mvd::emit_csv(std::cout, study.rows, !opt.no_timing);
        std::cout.flush();
        summary = stderr;
    }
    else {
        std::ofstream f(opt.out);
        mvd::emit_csv(f, study.rows, !opt.no_timing);
        if (!f)
            throw mvd::ConfigError("cannot write '" + opt.out + "'");
    }
    const char* names[] = {"eps2_D", "eps2_V", "epsInf_D", "epsInf_V", "eps_grad"};
    std::fprintf(summary, "log-log slopes against M_D:\n");
    for (int q = 0; q < 5; ++q)
        std::fprintf(summary, "  %-9s %.4f\n", names[q], study.slopes[q]);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume diffusion-reaction solver on merged Voronoi-Delaunay meshes"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_flag("--allow-nonacute", opt.allow_nonacute, "Accept meshes with right or obtuse angles");

    std::string file;
    auto* info = app.add_subcommand("mesh-info", "Print mesh quality and dual-mesh counts");
    info->add_option("file", file, "MSH 2.2 ASCII mesh")->required();
    info->add_flag("--dump", opt.dump, "List every MVD cell");

    auto* val = app.add_subcommand("validate", "Check a mesh for acuteness and control-volume tiling");
    val->add_option("file", file, "MSH 2.2 ASCII mesh")->required();

    auto* sol = app.add_subcommand("solve", "Run one manufactured-solution case");
    sol->add_option("config", file, "key = value config file")->required();
    sol->add_option("--out", opt.out, "CSV output path (overrides the config)");
    sol->add_option("--export-matrix", opt.export_matrix, "Write the system matrix in Matrix Market format");

    std::vector<std::string> inputs;
    auto* conv = app.add_subcommand("convergence", "Refinement study over config files, meshes or directories");
    conv->add_option("inputs", inputs, "Config files, .msh files, or directories of either")->required();
    conv->add_option("--out", opt.out, "CSV output path (default stdout)");
    conv->add_option("--tensor", opt.tensor, "K1..K4 or \"k11 k12 k21 k22\"");
    conv->add_option("--threads", opt.threads, "Cases solved in parallel")->check(CLI::PositiveNumber);
    conv->add_flag("--no-timing", opt.no_timing, "Write 0 in the seconds column");

    for (auto* sub : {sol, conv}) {
        sub->add_option("--tol", opt.tol, "Relative residual for CG")->check(CLI::PositiveNumber);
        sub->add_option("--reaction", opt.reaction, "Constant reaction coefficient r >= 0")
            ->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid;
    }

    try {
        if (*info)
            return mesh_info(file, opt);
        if (*val)
            return validate(file, opt);
        if (*sol)
            return solve(file, opt);
        return convergence(inputs, opt);
    }
    catch (const mvd::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return exit_solver;
    }
    catch (const mvd::ParseError& e) {
        std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
        return exit_invalid;
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_invalid;
    }
}

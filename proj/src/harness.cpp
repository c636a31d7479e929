#include "mvdfv/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace mvd {

namespace {

constexpr double wave = 4.0 * std::numbers::pi / 3.0;

double parse_real(std::string_view tok, const std::string& what)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ConfigError("bad number '" + std::string(tok) + "' for " + what);
    return v;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

} // namespace

Tensor2 tensor_preset(int k)
{
    switch (k) {
    case 1: return {1.0, 0.0, 0.0, 1.0};
    case 2: return {1.0, 0.0, 0.0, 100.0};
    case 3: return {1.0, 9.0, 9.0, 100.0};
    case 4: return {1.0, -9.0, -9.0, 100.0};
    default: throw ConfigError("tensor preset must be K1..K4, got K" + std::to_string(k));
    }
}

Tensor2 parse_tensor(const std::string& text)
{
    const std::string t = trim(text);
    if (t.size() == 2 && (t[0] == 'K' || t[0] == 'k') && t[1] >= '0' && t[1] <= '9')
        return tensor_preset(t[1] - '0');
    std::istringstream in(t);
    std::vector<std::string> tok;
    for (std::string s; in >> s;)
        tok.push_back(s);
    if (tok.size() != 4)
        throw ConfigError("tensor needs K1..K4 or four numbers, got '" + t + "'");
    const Tensor2 K{parse_real(tok[0], "k11"), parse_real(tok[1], "k12"), parse_real(tok[2], "k21"),
                    parse_real(tok[3], "k22")};
    if (!K.is_spd())
        throw ConfigError("tensor '" + t + "' is not symmetric positive definite");
    return K;
}

double exact_u(Point2 x)
{
    return x.x1 * (1.0 - x.x1) * std::sin(wave * x.x2);
}

Point2 exact_grad_u(Point2 x)
{
    return {(1.0 - 2.0 * x.x1) * std::sin(wave * x.x2), x.x1 * (1.0 - x.x1) * wave * std::cos(wave * x.x2)};
}

std::function<double(Point2)> manufactured_rhs(const Tensor2& K, double r)
{
    return [K, r](Point2 x) {
        const double s = std::sin(wave * x.x2);
        const double c = std::cos(wave * x.x2);
        const double q = x.x1 * (1.0 - x.x1);
        return 2.0 * K.k11 * s - (K.k12 + K.k21) * (1.0 - 2.0 * x.x1) * wave * c + K.k22 * wave * wave * q * s +
               r * q * s;
    };
}

CaseResult measure_errors(const ScalarField& y, const MvdMesh& mvd)
{
    require_on(y, mvd);
    ScalarField e = y;
    e.dirichlet_zero = true;
    CaseResult res;
    res.M_D = mvd.num_D();
    res.M_V = mvd.num_V();
    res.M = mvd.num_cells();
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        e.values_D[i] = y.values_D[i] - exact_u(mvd.tri.nodes[i]);
        res.epsInf_D = std::max(res.epsInf_D, std::abs(e.values_D[i]));
    }
    for (std::size_t j = 0; j < mvd.num_V(); ++j) {
        e.values_V[j] = y.values_V[j] - exact_u(mvd.dual.vertices[j]);
        res.epsInf_V = std::max(res.epsInf_V, std::abs(e.values_V[j]));
    }
    res.eps2_D = norm_D(e);
    res.eps2_V = norm_V(e);

    VectorField eg = grad_h(y, mvd);
    const VectorField exact = sample_vector(exact_grad_u, mvd);
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        eg.comp_D[m] -= exact.comp_D[m];
        eg.comp_V[m] -= exact.comp_V[m];
    }
    res.eps_grad = norm_star(eg);
    return res;
}

CaseResult solve_manufactured(const MvdMesh& mvd, const Tensor2& K, double r, double tol, std::size_t max_iter)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Problem problem = make_problem(mvd, K, r, manufactured_rhs(K, r));
    const LinearSystem sys = assemble(problem);
    SolveStats stats;
    const ScalarField y = solve_cg(sys, tol, max_iter, &stats);
    const auto t1 = std::chrono::steady_clock::now();

    CaseResult res = measure_errors(y, mvd);
    res.iters = stats.iterations;
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    res.energy_residual = energy_identity_residual(y, problem);
    const double kappa = K.eigenvalues()[0];
    const double fnorm = std::max(norm_D(problem.rhs), norm_V(problem.rhs));
    res.stability_ratio = kappa * norm_star(grad_h(y, mvd)) / fnorm;
    return res;
}

namespace {

TriMesh load_mesh(const CaseConfig& config)
{
    TriMesh mesh;
    if (!config.mesh.empty())
        mesh = parse_msh_file(config.mesh);
    else if (config.h > 0.0)
        mesh = generate_rectangle_mesh(Rectangle{}, config.h);
    else
        throw ConfigError("config needs either a mesh path or a positive h");
    // the manufactured solution only vanishes on this rectangle
    Point2 lo = mesh.nodes[0];
    Point2 hi = mesh.nodes[0];
    for (const Point2& p : mesh.nodes) {
        lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2)};
        hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2)};
    }
    const double tol = 1e-9;
    if (std::abs(lo.x1) > tol || std::abs(lo.x2) > tol || std::abs(hi.x1 - 1.0) > tol ||
        std::abs(hi.x2 - 0.75) > tol || std::abs(mesh.domain_area() - 0.75) > tol)
        throw ConfigError("manufactured cases need the domain [0,1] x [0,0.75]");
    return mesh;
}

} // namespace

CaseResult run_case(const CaseConfig& config)
{
    if (!config.tensor.is_spd())
        throw ConfigError("tensor is not symmetric positive definite");
    if (config.reaction < 0.0)
        throw NegativeReaction("reaction must be nonnegative");
    const TriMesh mesh = load_mesh(config);
    const MvdMesh mvd = build_mvd(mesh, config.allow_nonacute);
    const CaseResult res = solve_manufactured(mvd, config.tensor, config.reaction, config.tol, config.max_iter);
    if (!config.out.empty()) {
        std::ostringstream csv;
        emit_csv(csv, {res});
        std::ofstream f(config.out);
        if (!(f << csv.str()))
            throw ConfigError("cannot write '" + config.out + "'");
    }
    return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InsufficientLevels("slope needs at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StudyResult convergence_study(const std::vector<CaseConfig>& configs, unsigned threads)
{
    if (configs.size() < 3)
        throw InsufficientLevels("a convergence study needs at least 3 levels, got " +
                                 std::to_string(configs.size()));
    for (const CaseConfig& c : configs)
        if (c.tensor != configs[0].tensor || c.reaction != configs[0].reaction)
            throw ConfigError("all levels of a study must share tensor and reaction");

    StudyResult study;
    study.rows.resize(configs.size());
    std::vector<std::exception_ptr> failures(configs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < configs.size(); k = next++) {
            try {
                CaseConfig c = configs[k];
                c.out.clear();
                study.rows[k] = run_case(c);
            }
            catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(configs.size())));
    if (threads == 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    std::vector<double> nodes;
    std::array<std::vector<double>, 5> cols;
    for (const CaseResult& r : study.rows) {
        nodes.push_back(static_cast<double>(r.M_D));
        const std::array<double, 5> e{r.eps2_D, r.eps2_V, r.epsInf_D, r.epsInf_V, r.eps_grad};
        for (int q = 0; q < 5; ++q)
            cols[q].push_back(e[q]);
    }
    for (int q = 0; q < 5; ++q)
        study.slopes[q] = loglog_slope(nodes, cols[q]);
    return study;
}

const char* const csv_header = "level,M_D,M_V,M,eps2_D,eps2_V,epsInf_D,epsInf_V,eps_grad,iters,seconds";

void emit_csv(std::ostream& out, const std::vector<CaseResult>& rows, bool include_timing)
{
    out << csv_header << '\n';
    char buf[512];
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const CaseResult& r = rows[k];
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%.17g\n", k + 1, r.M_D,
                      r.M_V, r.M, r.eps2_D, r.eps2_V, r.epsInf_D, r.epsInf_V, r.eps_grad, r.iters,
                      include_timing ? r.seconds : 0.0);
        out << buf;
    }
}

CaseConfig parse_config(std::istream& in, const std::string& base_dir)
{
    CaseConfig c;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos)
            throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError(where + "duplicate key '" + key + "'");
        try {
            if (key == "mesh") {
                std::filesystem::path p(value);
                if (p.is_relative() && !base_dir.empty())
                    p = std::filesystem::path(base_dir) / p;
                c.mesh = p.string();
            }
            else if (key == "h") {
                c.h = parse_real(value, key);
                if (!(c.h > 0.0))
                    throw ConfigError("h must be positive");
            }
            else if (key == "tensor") {
                c.tensor = parse_tensor(value);
            }
            else if (key == "reaction") {
                c.reaction = parse_real(value, key);
                if (c.reaction < 0.0)
                    throw ConfigError("reaction must be nonnegative");
            }
            else if (key == "tol") {
                c.tol = parse_real(value, key);
                if (!(c.tol > 0.0))
                    throw ConfigError("tol must be positive");
            }
            else if (key == "out") {
                c.out = value;
            }
            else {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
        catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    if (c.mesh.empty() && !(c.h > 0.0))
        throw ConfigError("config needs 'mesh' or 'h'");
    return c;
}

CaseConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    return parse_config(in, std::filesystem::path(path).parent_path().string());
}

} // namespace mvd

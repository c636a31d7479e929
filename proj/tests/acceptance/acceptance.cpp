// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
// Exit status is nonzero when any criterion fails. `--known-failure N` marks
// criterion N as an expected failure: its FAIL line is still printed, but it
// does not affect the exit status unless it unexpectedly passes.

#include "mvdfv/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace mvd;

namespace {

// tolerances
constexpr double area_tol = 1e-10;
constexpr double adjoint_tol = 1e-11;
constexpr double exact_tol = 1e-12;
constexpr double rotation_tol = 1e-12;
constexpr double symmetry_tol = 1e-12;
constexpr double cg_tol = 1e-10;
constexpr double energy_factor = 10.0;
constexpr double l2_lo = -1.3, l2_hi = -0.7;
constexpr double inf_lo = -1.3, inf_hi = -0.6;
constexpr double growth_limit = 1.5;
constexpr double mesh_seconds = 1.0;
constexpr double adjoint_seconds = 5.0;
constexpr double study_seconds = 180.0;

const int fixture_rows[] = {1, 4, 7, 10, 13, 16};

std::string fixture(int row)
{
    char name[32];
    std::snprintf(name, sizeof name, "/mesh%02d.msh", row);
    return std::string(MVD_FIXTURE_DIR) + name;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// details of the criterion being evaluated, printed after its verdict
std::string details;

template <class... A>
void detail(const char* fmt, A... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details += "  ";
    details += buf;
    details += '\n';
}

struct Report
{
    std::set<int> known;
    int unexpected = 0;

    void line(int id, bool ok, const char* what, std::string& notes = details)
    {
        std::printf("%s %d %s\n%s", ok ? "PASS" : "FAIL", id, what, notes.c_str());
        notes.clear();
        if (known.count(id)) {
            if (ok) {
                std::printf("  criterion %d was expected to fail but passed\n", id);
                ++unexpected;
            }
            else {
                std::printf("  expected failure, see the decisions ledger\n");
            }
        }
        else if (!ok) {
            ++unexpected;
        }
        std::fflush(stdout);
    }
};

struct Loaded
{
    int row;
    MvdMesh mvd;
    double seconds;
};

std::vector<Loaded> load_fixtures()
{
    std::vector<Loaded> out;
    for (int row : fixture_rows) {
        const auto t0 = std::chrono::steady_clock::now();
        MvdMesh mvd = build_mvd(parse_msh_file(fixture(row)));
        out.push_back({row, std::move(mvd), seconds_since(t0)});
    }
    return out;
}

// 1
bool duality_counts(const std::vector<Loaded>& fx)
{
    bool ok = true;
    for (const Loaded& f : fx) {
        const std::size_t T = f.mvd.tri.num_triangles();
        const std::size_t B = f.mvd.tri.boundary_nodes.size();
        const bool ids = f.mvd.num_V() == T + B && 2 * f.mvd.num_cells() == 3 * T + B;
        ok = ok && ids && f.seconds < mesh_seconds;
        detail("mesh%02d: M_D=%zu M_V=%zu M=%zu T=%zu B=%zu identities %s, %.3f s", f.row, f.mvd.num_D(),
               f.mvd.num_V(), f.mvd.num_cells(), T, B, ids ? "hold" : "broken", f.seconds);
    }
    const MvdMesh& first = fx[0].mvd;
    const bool coarse = first.num_D() == 16 && first.num_V() == 30 && first.num_cells() == 35;
    detail("mesh01 expected M_D=16 M_V=30 M=35: %s", coarse ? "yes" : "no");
    return ok && coarse;
}

// 2
bool partition(const MvdMesh& mvd, const char* name, double seconds)
{
    double sd = 0, sv = 0, ss = 0;
    for (double s : mvd.S_D)
        sd += s;
    for (double s : mvd.S_V)
        sv += s;
    for (const MvdCell& c : mvd.cells)
        ss += c.S_star;
    const double a = mvd.domain_area();
    const double err = std::max({std::abs(sd - a), std::abs(sv - a), std::abs(ss - a)}) / a;
    detail("%s: max relative area error %.2e, %.3f s", name, err, seconds);
    return err <= area_tol && seconds < mesh_seconds;
}

// 3
bool adjointness(const std::vector<Loaded>& fx)
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (const Loaded& f : fx) {
        const MvdMesh& mvd = f.mvd;
        std::mt19937_64 rng(1000 + f.row);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst_D = 0.0, worst_V = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField y = ScalarField::zeros(mvd);
            for (double& v : y.values_D)
                v = u(rng);
            for (double& v : y.values_V)
                v = u(rng);
            impose_dirichlet_zero(y);
            VectorField w = VectorField::zeros(mvd);
            for (double& v : w.comp_D)
                v = u(rng);
            for (double& v : w.comp_V)
                v = u(rng);
            const ScalarField d = div_h(w, mvd);
            const VectorField g = grad_h(y, mvd);
            const double lD = inner_D(d, y), rD = -2.0 * inner_star_D(w, g);
            const double lV = inner_V(d, y), rV = -2.0 * inner_star_V(w, g);
            worst_D = std::max(worst_D, std::abs(lD - rD) / std::max(std::abs(lD) + std::abs(rD), 1e-300));
            worst_V = std::max(worst_V, std::abs(lV - rV) / std::max(std::abs(lV) + std::abs(rV), 1e-300));
        }
        detail("mesh%02d: D identity %.2e, V identity %.2e", f.row, worst_D, worst_V);
        ok = ok && worst_D <= adjoint_tol && worst_V <= adjoint_tol;
    }
    const double t = seconds_since(t0);
    detail("%.3f s", t);
    return ok && t < adjoint_seconds;
}

// 4
bool linear_exactness(const MvdMesh& mvd, const char* name)
{
    const Point2 a{0.37, -1.9};
    const ScalarField y = sample_scalar([&](Point2 x) { return dot(a, x) - 0.25; }, mvd);
    const VectorField g = grad_h(y, mvd);
    double grad_err = 0.0;
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        grad_err = std::max(grad_err, std::abs(g.comp_D[m] - dot(a, mvd.cells[m].frame.e_D)));
        grad_err = std::max(grad_err, std::abs(g.comp_V[m] - dot(a, mvd.cells[m].frame.e_V)));
    }
    const Point2 c{1.3, -0.6};
    const VectorField w = sample_vector([&](Point2) { return c; }, mvd);
    const auto dD = div_D(w, mvd);
    const auto dV = div_V(w, mvd);
    // each divergence is scaled by the sum of its face flux magnitudes
    double div_err = 0.0;
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        if (mvd.boundary_D[i])
            continue;
        double scale = 0.0;
        for (const Incidence& in : mvd.signs.d[i])
            scale += std::abs(w.comp_D[in.cell]) * mvd.cells[in.cell].len_V;
        div_err = std::max(div_err, std::abs(dD[i]) * mvd.S_D[i] / scale);
    }
    for (std::size_t j = 0; j < mvd.num_V(); ++j) {
        if (mvd.boundary_V[j])
            continue;
        double scale = 0.0;
        for (const Incidence& in : mvd.signs.v[j])
            scale += std::abs(w.comp_V[in.cell]) * mvd.cells[in.cell].len_D;
        div_err = std::max(div_err, std::abs(dV[j]) * mvd.S_V[j] / scale);
    }
    detail("%s: affine gradient error %.2e, scaled divergence of a constant %.2e", name, grad_err, div_err);
    return grad_err <= exact_tol && div_err <= exact_tol;
}

// 5
bool rotation()
{
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double p = 0.01 + 50.0 * std::abs(u(rng));
        const double q = 0.01 + 50.0 * std::abs(u(rng));
        const double b = 0.99 * std::sqrt(p * q) * u(rng);
        const Tensor2 K{p, b, b, q};
        const Tensor2 R = rotate_tensor(K, 10.0 * u(rng));
        const double s = K.max_abs();
        worst = std::max({worst, std::abs(R.k12 - R.k21) / s, std::abs(R.trace() - K.trace()) / std::abs(K.trace()),
                          std::abs(R.det() - K.det()) / (s * s)});
    }
    const Tensor2 r = rotate_tensor(Tensor2{1, 0, 0, 100}, std::numbers::pi / 4.0);
    const double ref = std::max({std::abs(r.k11 - 50.5), std::abs(r.k12 - 49.5), std::abs(r.k21 - 49.5),
                                 std::abs(r.k22 - 50.5)});
    detail("1000 random pairs: worst relative invariant error %.2e", worst);
    detail("K2 at pi/4: [[%.15g, %.15g], [%.15g, %.15g]], error %.2e", r.k11, r.k12, r.k21, r.k22, ref);
    return worst <= rotation_tol && ref <= rotation_tol;
}

// 6 and 7 share the solves
bool system_structure(const std::vector<Loaded>& fx, std::vector<double>& energy)
{
    bool ok = true;
    for (const Loaded& f : fx) {
        double worst_asym = 0.0, k1_coupling = 0.0, min_k34_coupling = 1e300, worst_iter_ratio = 0.0;
        for (int k = 1; k <= 4; ++k) {
            for (double r : {0.0, 1.0}) {
                const Tensor2 K = tensor_preset(k);
                const Problem p = make_problem(f.mvd, K, r, manufactured_rhs(K, r));
                const LinearSystem sys = assemble(p);
                worst_asym = std::max(worst_asym, sys.A.asymmetry() / sys.A.max_abs());
                if (k == 1)
                    k1_coupling = std::max(k1_coupling, sys.coupling_max_abs());
                if (k >= 3)
                    min_k34_coupling = std::min(min_k34_coupling, sys.coupling_max_abs());
                SolveStats st;
                try {
                    const ScalarField y = solve_cg(sys, cg_tol, 5 * sys.size(), &st);
                    energy.push_back(energy_identity_residual(y, p));
                    worst_iter_ratio = std::max(worst_iter_ratio, double(st.iterations) / double(sys.size()));
                }
                catch (const SolverError& e) {
                    detail("mesh%02d K%d r=%g: %s", f.row, k, r, e.what());
                    ok = false;
                }
            }
        }
        detail("mesh%02d: K1 coupling %.1e, min K3/K4 coupling %.3g, asymmetry %.1e, max iterations/N %.3f", f.row,
               k1_coupling, min_k34_coupling, worst_asym, worst_iter_ratio);
        ok = ok && k1_coupling == 0.0 && min_k34_coupling > 0.0 && worst_asym <= symmetry_tol &&
             worst_iter_ratio <= 5.0;
    }
    return ok;
}

struct Study
{
    int k;
    double r;
    StudyResult result;
};

// 8
bool convergence(std::vector<Study>& studies, std::vector<double>& energy)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (double r : {0.0, 1.0}) {
        for (int k = 1; k <= 4; ++k) {
            std::vector<CaseConfig> configs;
            for (int row : fixture_rows) {
                CaseConfig c;
                c.mesh = fixture(row);
                c.tensor = tensor_preset(k);
                c.reaction = r;
                c.tol = cg_tol;
                configs.push_back(c);
            }
            studies.push_back({k, r, convergence_study(configs, 1)});
            for (const CaseResult& row : studies.back().result.rows)
                energy.push_back(row.energy_residual);
        }
    }
    const double t = seconds_since(t0);

    bool ok = true;
    for (const Study& s : studies) {
        const auto& sl = s.result.slopes;
        const bool l2 = sl[0] >= l2_lo && sl[0] <= l2_hi && sl[1] >= l2_lo && sl[1] <= l2_hi;
        const bool inf = sl[2] >= inf_lo && sl[2] <= inf_hi && sl[3] >= inf_lo && sl[3] <= inf_hi;
        detail("K%d r=%g: slopes eps2_D %.3f eps2_V %.3f epsInf_D %.3f epsInf_V %.3f eps_grad %.3f  %s", s.k, s.r,
               sl[0], sl[1], sl[2], sl[3], sl[4], l2 && inf ? "in band" : "OUT OF BAND");
        ok = ok && l2 && inf;
    }
    // gradient accuracy drops for the full anisotropic tensors at every level
    bool grad_order = true;
    for (const Study& iso : studies) {
        if (iso.k != 1)
            continue;
        for (const Study& s : studies) {
            if ((s.k != 3 && s.k != 4) || s.r != iso.r)
                continue;
            for (std::size_t lv = 0; lv < s.result.rows.size(); ++lv)
                grad_order = grad_order && s.result.rows[lv].eps_grad > iso.result.rows[lv].eps_grad;
        }
    }
    detail("eps_grad(K3), eps_grad(K4) > eps_grad(K1) at every level: %s", grad_order ? "yes" : "no");
    detail("%zu studies x %zu levels, %.2f s", studies.size(), std::size(fixture_rows), t);
    return ok && grad_order && t < study_seconds;
}

// 9
bool stability(const std::vector<Study>& studies)
{
    bool ok = true;
    for (const Study& s : studies) {
        const auto& rows = s.result.rows;
        double lo = rows[0].stability_ratio;
        std::string seq;
        for (const CaseResult& r : rows) {
            lo = std::min(lo, r.stability_ratio);
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.4f", r.stability_ratio);
            seq += buf;
        }
        const bool fine = rows.back().stability_ratio <= growth_limit * lo;
        detail("K%d r=%g:%s", s.k, s.r, seq.c_str());
        ok = ok && fine;
    }
    return ok;
}

// 10
bool parser_robustness()
{
    bool ok = true;
    std::mt19937_64 rng(99);
    for (int row : fixture_rows) {
        std::ifstream in(fixture(row), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        std::size_t checked = 0, bad = 0;
        const auto expect_error = [&](const std::string& variant) {
            ++checked;
            try {
                parse_msh_string(variant);
                ++bad;
            }
            catch (const ParseError& e) {
                if (e.line() == 0)
                    ++bad;
            }
            catch (...) {
                ++bad;
            }
        };

        bool parses = true;
        try {
            parse_msh_string(text);
        }
        catch (...) {
            parses = false;
        }

        std::size_t n = text.size();
        while (n > 0 && (text[n - 1] == '\n' || text[n - 1] == '\r'))
            --n;
        std::uniform_int_distribution<std::size_t> pos(0, n - 1);
        for (int k = 0; k < 100; ++k)
            expect_error(text.substr(0, pos(rng)));

        // replace a random token with garbage
        std::vector<std::size_t> starts;
        for (std::size_t i = 0; i < n; ++i)
            if (text[i] != ' ' && text[i] != '\n' && (i == 0 || text[i - 1] == ' ' || text[i - 1] == '\n'))
                starts.push_back(i);
        std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
        for (int k = 0; k < 100; ++k) {
            const std::size_t s = starts[pick(rng)];
            const std::size_t e = text.find_first_of(" \n", s);
            expect_error(text.substr(0, s) + "#?" + text.substr(e));
        }
        detail("mesh%02d: parses %s, %zu damaged variants, %zu not reported with a line", row, parses ? "yes" : "no",
               checked, bad);
        ok = ok && parses && bad == 0;
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    Report report;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--known-failure") == 0 && i + 1 < argc) {
            report.known.insert(std::atoi(argv[++i]));
        }
        else {
            std::fprintf(stderr, "usage: %s [--known-failure N]...\n", argv[0]);
            return 2;
        }
    }

    try {
        const std::vector<Loaded> fx = load_fixtures();

        report.line(1, duality_counts(fx), "mesh duality counts");

        bool part = true;
        for (const Loaded& f : fx) {
            char name[16];
            std::snprintf(name, sizeof name, "mesh%02d", f.row);
            part = partition(f.mvd, name, f.seconds) && part;
        }
        std::vector<MvdMesh> generated;
        for (double h : {0.3, 0.15, 0.07, 0.03}) {
            const auto t0 = std::chrono::steady_clock::now();
            generated.push_back(build_mvd(generate_rectangle_mesh(Rectangle{}, h)));
            char name[32];
            std::snprintf(name, sizeof name, "generated h=%g", h);
            part = partition(generated.back(), name, seconds_since(t0)) && part;
        }
        report.line(2, part, "partition of unity");

        report.line(3, adjointness(fx), "mimetic adjointness");

        bool exact = true;
        for (const Loaded& f : fx) {
            char name[16];
            std::snprintf(name, sizeof name, "mesh%02d", f.row);
            exact = linear_exactness(f.mvd, name) && exact;
        }
        for (std::size_t g = 0; g < generated.size(); ++g) {
            char name[32];
            std::snprintf(name, sizeof name, "generated #%zu", g + 1);
            exact = linear_exactness(generated[g], name) && exact;
        }
        report.line(4, exact, "linear exactness");

        report.line(5, rotation(), "tensor rotation");

        std::vector<double> energy;
        report.line(6, system_structure(fx, energy), "system structure");

        std::vector<Study> studies;
        const bool conv = convergence(studies, energy);
        std::string conv_details;
        conv_details.swap(details);

        double worst_energy = 0.0;
        for (double e : energy)
            worst_energy = std::max(worst_energy, e);
        detail("%zu solves, worst energy identity residual %.2e (limit %.1e)", energy.size(), worst_energy,
               energy_factor * cg_tol);
        report.line(7, worst_energy <= energy_factor * cg_tol, "energy identity");

        report.line(8, conv, "convergence reproduction", conv_details);
        report.line(9, stability(studies), "stability structure");
        report.line(10, parser_robustness(), "parser robustness");
    }
    catch (const std::exception& e) {
        std::printf("FAIL acceptance run aborted: %s\n", e.what());
        return 1;
    }
    return report.unexpected == 0 ? 0 : 1;
}

/** \file harness.hpp
 * \brief Manufactured-solution experiments on the rectangle
 * [0,1] x [0,0.75]: single cases, refinement studies and CSV output.
 */

#ifndef MVDFV_HARNESS_HPP
#define MVDFV_HARNESS_HPP

#include "mvdfv/system.hpp"

#include <istream>
#include <optional>
#include <string>

namespace mvd {

/// K1 = I, K2 = diag(1, 100), K3 = [[1, 9], [9, 100]], K4 = [[1, -9], [-9, 100]].
Tensor2 tensor_preset(int k);
/// "K1".."K4" or four numbers "k11 k12 k21 k22". Throws ConfigError.
Tensor2 parse_tensor(const std::string& text);

/// u = x1 (1 - x1) sin(a x2), a = 4 pi / 3.
double exact_u(Point2 x);
Point2 exact_grad_u(Point2 x);
/// f = -div(K grad u) + r u for constant K.
std::function<double(Point2)> manufactured_rhs(const Tensor2& K, double r);

struct CaseConfig
{
    /// MSH file; when empty the mesh is generated with spacing h.
    std::string mesh;
    double h = 0.0;
    Tensor2 tensor;
    double reaction = 1.0;
    double tol = 1e-10;
    std::string out;
    bool allow_nonacute = false;
    std::size_t max_iter = 0;
};

struct CaseResult
{
    std::size_t M_D = 0;
    std::size_t M_V = 0;
    std::size_t M = 0;
    double eps2_D = 0.0;
    double eps2_V = 0.0;
    double epsInf_D = 0.0;
    double epsInf_V = 0.0;
    double eps_grad = 0.0;
    std::size_t iters = 0;
    double seconds = 0.0;
    /// Not part of the CSV.
    double energy_residual = 0.0;
    /// kappa ||grad_h y||_* / max(||f_D||_D, ||f_V||_V), kappa the smaller
    /// eigenvalue of K.
    double stability_ratio = 0.0;
};

/// Errors of y against the exact solution.
CaseResult measure_errors(const ScalarField& y, const MvdMesh& mvd);

/// Assemble, solve and measure on an existing mesh.
CaseResult solve_manufactured(const MvdMesh& mvd, const Tensor2& K, double r, double tol = 1e-10,
                              std::size_t max_iter = 0);

/// Load or generate the mesh, then solve_manufactured. Writes a one-row CSV
/// to config.out when set; nothing is written on failure.
CaseResult run_case(const CaseConfig& config);

struct StudyResult
{
    std::vector<CaseResult> rows;
    /// Log-log slopes against M_D of eps2_D, eps2_V, epsInf_D, epsInf_V, eps_grad.
    std::array<double, 5> slopes{};
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs the levels (in parallel when threads > 1), keeps config order.
/// Throws InsufficientLevels below 3 levels and ConfigError when tensor or
/// reaction differ between levels.
StudyResult convergence_study(const std::vector<CaseConfig>& configs, unsigned threads = 1);

extern const char* const csv_header;

/// seconds is written as 0 when include_timing is false, so reruns are
/// byte-identical.
void emit_csv(std::ostream& out, const std::vector<CaseResult>& rows, bool include_timing = true);

/// Flat `key = value` file with keys mesh, h, tensor, reaction, tol, out.
/// '#' starts a comment. Relative mesh paths resolve against base_dir.
CaseConfig parse_config(std::istream& in, const std::string& base_dir = "");
CaseConfig parse_config_file(const std::string& path);

} // namespace mvd

#endif

/** \file system.hpp
 * \brief Assembly and solution of the coupled D/V system for
 * -div(K grad u) + r u = f with homogeneous Dirichlet data.
 */

#ifndef MVDFV_SYSTEM_HPP
#define MVDFV_SYSTEM_HPP

#include "mvdfv/operators.hpp"

#include <ostream>

namespace mvd {

struct Problem
{
    const MvdMesh* mesh = nullptr;
    TensorField tensor;
    /// r >= 0 at nodes.
    ScalarField reaction;
    ScalarField rhs;
};

/// Problem with constant K and r, and f sampled at the nodes.
Problem make_problem(const MvdMesh& mvd, const Tensor2& K, double r, const std::function<double(Point2)>& f);

/// Compressed sparse rows, columns sorted within each row.
struct CsrMatrix
{
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<Index> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    /// Zero when the entry is not stored.
    double at(std::size_t i, std::size_t j) const;
    std::vector<double> multiply(const std::vector<double>& x) const;
    double max_abs() const;
    /// max |a_ij - a_ji|.
    double asymmetry() const;
};

/// Unknowns are the interior D-nodes followed by the interior V-nodes.
struct LinearSystem
{
    CsrMatrix A;
    std::vector<double> b;
    /// Node of each unknown; D-node index for the first num_D_unknowns,
    /// V-node index after that.
    std::vector<Index> node_of;
    std::size_t num_D_unknowns = 0;
    /// -1 for boundary nodes.
    std::vector<Index> unknown_of_D;
    std::vector<Index> unknown_of_V;
    const MvdMesh* mesh = nullptr;

    std::size_t size() const { return b.size(); }
    /// Largest |entry| of the D-V coupling block.
    double coupling_max_abs() const;
};

/// Rows are the node equations multiplied by their control-volume measure,
/// which makes A symmetric: A = sum over cells of len_D len_V B^T K~ B plus
/// r S on the diagonal, b = f S. Throws NegativeReaction and NonSpdTensor.
LinearSystem assemble(const Problem& problem);

struct SolveStats
{
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. max_iter = 0 means 10 N + 100.
/// Throws NotConverged and BreakdownNonSpd.
std::vector<double> pcg(const CsrMatrix& A, const std::vector<double>& b, double rel_tol = 1e-10,
                        std::size_t max_iter = 0, SolveStats* stats = nullptr);

ScalarField solve_cg(const LinearSystem& system, double rel_tol = 1e-10, std::size_t max_iter = 0,
                     SolveStats* stats = nullptr);

/// Dense Cholesky, for small systems (N <= 200) only.
ScalarField solve_dense(const LinearSystem& system);

/// Scatter unknowns into a dirichlet_zero field.
ScalarField scatter(const LinearSystem& system, const std::vector<double>& x);
std::vector<double> gather(const LinearSystem& system, const ScalarField& y);

/// Relative mismatch of 2(K~ grad_h y, grad_h y)_* + (r y, y)_D + (r y, y)_V
/// against (f, y)_D + (f, y)_V.
double energy_identity_residual(const ScalarField& y, const Problem& problem);

/// Matrix Market coordinate real general.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);

} // namespace mvd

#endif

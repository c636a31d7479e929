#include "mvdfv/system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace mvd {

Problem make_problem(const MvdMesh& mvd, const Tensor2& K, double r, const std::function<double(Point2)>& f)
{
    return {&mvd, TensorField(K), sample_scalar([r](Point2) { return r; }, mvd), sample_scalar(f, mvd)};
}

double CsrMatrix::at(std::size_t i, std::size_t j) const
{
    const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<Index>(j));
    return it != last && *it == static_cast<Index>(j) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const
{
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            s += val[k] * x[col[k]];
        y[i] = s;
    }
    return y;
}

double CsrMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : val)
        m = std::max(m, std::abs(v));
    return m;
}

double CsrMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            worst = std::max(worst, std::abs(val[k] - at(static_cast<std::size_t>(col[k]), i)));
    return worst;
}

double LinearSystem::coupling_max_abs() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < A.n; ++i)
        for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            if ((i < num_D_unknowns) != (static_cast<std::size_t>(A.col[k]) < num_D_unknowns))
                m = std::max(m, std::abs(A.val[k]));
    return m;
}

namespace {

using Triplet = std::tuple<Index, Index, double>;

CsrMatrix to_csr(std::size_t n, std::vector<Triplet>& trips)
{
    std::stable_sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
        return std::get<0>(a) < std::get<0>(b) || (std::get<0>(a) == std::get<0>(b) && std::get<1>(a) < std::get<1>(b));
    });
    CsrMatrix A;
    A.n = n;
    A.row_ptr.assign(n + 1, 0);
    for (std::size_t k = 0; k < trips.size();) {
        const auto [i, j, v0] = trips[k];
        double v = v0;
        std::size_t q = k + 1;
        for (; q < trips.size() && std::get<0>(trips[q]) == i && std::get<1>(trips[q]) == j; ++q)
            v += std::get<2>(trips[q]);
        A.col.push_back(j);
        A.val.push_back(v);
        ++A.row_ptr[i + 1];
        k = q;
    }
    for (std::size_t i = 0; i < n; ++i)
        A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

} // namespace

LinearSystem assemble(const Problem& problem)
{
    if (problem.mesh == nullptr)
        throw MeshMismatch("problem has no mesh");
    const MvdMesh& mvd = *problem.mesh;
    require_on(problem.reaction, mvd);
    require_on(problem.rhs, mvd);
    for (std::size_t i = 0; i < mvd.num_D(); ++i)
        if (problem.reaction.values_D[i] < 0.0)
            throw NegativeReaction("negative reaction coefficient at D-node " + std::to_string(i));
    for (std::size_t j = 0; j < mvd.num_V(); ++j)
        if (problem.reaction.values_V[j] < 0.0)
            throw NegativeReaction("negative reaction coefficient at V-node " + std::to_string(j));

    LinearSystem sys;
    sys.mesh = &mvd;
    sys.unknown_of_D.assign(mvd.num_D(), -1);
    sys.unknown_of_V.assign(mvd.num_V(), -1);
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        if (!mvd.boundary_D[i]) {
            sys.unknown_of_D[i] = static_cast<Index>(sys.node_of.size());
            sys.node_of.push_back(static_cast<Index>(i));
        }
    }
    sys.num_D_unknowns = sys.node_of.size();
    for (std::size_t j = 0; j < mvd.num_V(); ++j) {
        if (!mvd.boundary_V[j]) {
            sys.unknown_of_V[j] = static_cast<Index>(sys.node_of.size());
            sys.node_of.push_back(static_cast<Index>(j));
        }
    }
    const std::size_t n = sys.node_of.size();

    std::vector<Triplet> trips;
    trips.reserve(16 * mvd.num_cells() + n);
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        const MvdCell& c = mvd.cells[m];
        const Tensor2 k = local_tensor(problem.tensor, mvd, m);
        const std::array<Index, 4> u{sys.unknown_of_D[c.d_nodes[0]], sys.unknown_of_D[c.d_nodes[1]],
                                     sys.unknown_of_V[c.v_nodes[0]], sys.unknown_of_V[c.v_nodes[1]]};
        // rows of B: d/dD and d/dV acting on (y_i, y_i+, y_j, y_j+)
        const std::array<double, 4> gD{-1.0 / c.len_D, 1.0 / c.len_D, 0.0, 0.0};
        const std::array<double, 4> gV{0.0, 0.0, -1.0 / c.len_V, 1.0 / c.len_V};
        const double w = c.len_D * c.len_V;
        for (int a = 0; a < 4; ++a) {
            if (u[a] < 0)
                continue;
            for (int b = 0; b < 4; ++b) {
                if (u[b] < 0)
                    continue;
                const double v = w * (gD[a] * (k.k11 * gD[b] + k.k12 * gV[b]) + gV[a] * (k.k21 * gD[b] + k.k22 * gV[b]));
                if (v != 0.0)
                    trips.emplace_back(u[a], u[b], v);
            }
        }
    }

    sys.b.assign(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) {
        const auto node = static_cast<std::size_t>(sys.node_of[q]);
        const bool is_D = q < sys.num_D_unknowns;
        const double S = is_D ? mvd.S_D[node] : mvd.S_V[node];
        const double r = is_D ? problem.reaction.values_D[node] : problem.reaction.values_V[node];
        const double f = is_D ? problem.rhs.values_D[node] : problem.rhs.values_V[node];
        trips.emplace_back(static_cast<Index>(q), static_cast<Index>(q), r * S);
        sys.b[q] = f * S;
    }
    sys.A = to_csr(n, trips);
    return sys;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

} // namespace

std::vector<double> pcg(const CsrMatrix& A, const std::vector<double>& b, double rel_tol, std::size_t max_iter,
                        SolveStats* stats)
{
    const std::size_t n = A.n;
    if (b.size() != n)
        throw MeshMismatch("right-hand side length does not match the matrix");
    if (max_iter == 0)
        max_iter = 10 * n + 100;
    std::vector<double> x(n, 0.0);
    SolveStats local;
    SolveStats& st = stats != nullptr ? *stats : local;
    st = {};
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0)
        return x;

    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = A.at(i, i);
        if (!(d > 0.0))
            throw BreakdownNonSpd("non-positive diagonal entry in row " + std::to_string(i));
        inv_diag[i] = 1.0 / d;
    }

    std::vector<double> r = b;
    std::vector<double> z(n);
    std::vector<double> p(n);
    const auto restart = [&] {
        for (std::size_t i = 0; i < n; ++i)
            z[i] = inv_diag[i] * r[i];
        p = z;
        return dot(r, z);
    };
    double rz = restart();
    double res = 1.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const std::vector<double> Ap = A.multiply(p);
        const double pAp = dot(p, Ap);
        if (!(pAp > 0.0))
            throw BreakdownNonSpd("p^T A p = " + std::to_string(pAp) + " at iteration " + std::to_string(it));
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        st.iterations = it;
        res = std::sqrt(dot(r, r)) / bnorm;
        if (res <= rel_tol) {
            // the recurrence can drift from b - Ax, so confirm before stopping
            const std::vector<double> Ax = A.multiply(x);
            for (std::size_t i = 0; i < n; ++i)
                r[i] = b[i] - Ax[i];
            res = std::sqrt(dot(r, r)) / bnorm;
            st.relative_residual = res;
            if (res <= rel_tol)
                return x;
            rz = restart();
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            z[i] = inv_diag[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
    }
    st.relative_residual = res;
    throw NotConverged("CG did not reach relative residual " + std::to_string(rel_tol) + " in " +
                           std::to_string(max_iter) + " iterations (residual " + std::to_string(res) + ")",
                       max_iter, res);
}

ScalarField scatter(const LinearSystem& system, const std::vector<double>& x)
{
    const MvdMesh& mvd = *system.mesh;
    ScalarField y = ScalarField::zeros(mvd, true);
    for (std::size_t q = 0; q < x.size(); ++q) {
        if (q < system.num_D_unknowns)
            y.values_D[system.node_of[q]] = x[q];
        else
            y.values_V[system.node_of[q]] = x[q];
    }
    return y;
}

std::vector<double> gather(const LinearSystem& system, const ScalarField& y)
{
    require_on(y, *system.mesh);
    std::vector<double> x(system.size());
    for (std::size_t q = 0; q < x.size(); ++q)
        x[q] = q < system.num_D_unknowns ? y.values_D[system.node_of[q]] : y.values_V[system.node_of[q]];
    return x;
}

ScalarField solve_cg(const LinearSystem& system, double rel_tol, std::size_t max_iter, SolveStats* stats)
{
    return scatter(system, pcg(system.A, system.b, rel_tol, max_iter, stats));
}

ScalarField solve_dense(const LinearSystem& system)
{
    const std::size_t n = system.size();
    if (n > 200)
        throw Error("dense solve is limited to 200 unknowns, got " + std::to_string(n));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = system.A.row_ptr[i]; k < system.A.row_ptr[i + 1]; ++k)
            A(static_cast<Eigen::Index>(i), system.A.col[k]) = system.A.val[k];
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        b(static_cast<Eigen::Index>(i)) = system.b[i];
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw BreakdownNonSpd("dense Cholesky failed: matrix is not positive definite");
    const Eigen::VectorXd x = llt.solve(b);
    return scatter(system, std::vector<double>(x.data(), x.data() + n));
}

double energy_identity_residual(const ScalarField& y, const Problem& problem)
{
    const MvdMesh& mvd = *problem.mesh;
    const VectorField g = grad_h(y, mvd);
    const VectorField flux = apply_flux(problem.tensor, g, mvd);
    ScalarField ry = y;
    for (std::size_t i = 0; i < ry.values_D.size(); ++i)
        ry.values_D[i] *= problem.reaction.values_D[i];
    for (std::size_t j = 0; j < ry.values_V.size(); ++j)
        ry.values_V[j] *= problem.reaction.values_V[j];
    const double lhs = -2.0 * inner_star(flux, g) + inner_D(ry, y) + inner_V(ry, y);
    const double rhs = inner_D(problem.rhs, y) + inner_V(problem.rhs, y);
    const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / denom;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.n << ' ' << A.n << ' ' << A.nnz() << '\n';
    char buf[96];
    for (std::size_t i = 0; i < A.n; ++i) {
        for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%zu %d %.17g\n", i + 1, A.col[k] + 1, A.val[k]);
            out << buf;
        }
    }
}

} // namespace mvd

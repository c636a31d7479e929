/** \file fields.hpp
 * \brief Mesh functions on D- and V-nodes and two-component vector fields at
 * MVD cell centers, with their weighted inner products.
 */

#ifndef MVDFV_FIELDS_HPP
#define MVDFV_FIELDS_HPP

#include "mvdfv/dualmesh.hpp"

#include <functional>

namespace mvd {

struct ScalarField
{
    std::vector<double> values_D;
    std::vector<double> values_V;
    /// Values on boundary D- and V-nodes are zero.
    bool dirichlet_zero = false;
    const MvdMesh* mesh = nullptr;

    static ScalarField zeros(const MvdMesh& mvd, bool dirichlet_zero = false);
};

/// Components along e_D and e_V of each cell.
struct VectorField
{
    std::vector<double> comp_D;
    std::vector<double> comp_V;
    const MvdMesh* mesh = nullptr;

    static VectorField zeros(const MvdMesh& mvd);
};

/// Sum of y*v*S^D over interior D-nodes when either field is dirichlet_zero,
/// over all D-nodes otherwise.
double inner_D(const ScalarField& y, const ScalarField& v);
/// Sum over interior V-nodes; boundary V-nodes have no control volume.
double inner_V(const ScalarField& y, const ScalarField& v);
/// Sum of (v_D w_D + v_V w_V) S*.
double inner_star(const VectorField& v, const VectorField& w);
/// D or V part of inner_star alone.
double inner_star_D(const VectorField& v, const VectorField& w);
double inner_star_V(const VectorField& v, const VectorField& w);

inline double norm_D(const ScalarField& y) { return std::sqrt(inner_D(y, y)); }
inline double norm_V(const ScalarField& y) { return std::sqrt(inner_V(y, y)); }
inline double norm_star(const VectorField& v) { return std::sqrt(inner_star(v, v)); }

ScalarField sample_scalar(const std::function<double(Point2)>& f, const MvdMesh& mvd);
VectorField sample_vector(const std::function<Point2(Point2)>& w, const MvdMesh& mvd);

/// Zero the boundary values and set dirichlet_zero.
void impose_dirichlet_zero(ScalarField& y);

/// Throws MeshMismatch unless y lives on mvd with matching sizes.
void require_on(const ScalarField& y, const MvdMesh& mvd);
void require_on(const VectorField& v, const MvdMesh& mvd);

} // namespace mvd

#endif

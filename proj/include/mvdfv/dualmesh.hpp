/** \file dualmesh.hpp
 * \brief Voronoi dual of an acute Delaunay mesh and the merged
 * Voronoi-Delaunay (MVD) cells built from both.
 */

#ifndef MVDFV_DUALMESH_HPP
#define MVDFV_DUALMESH_HPP

#include "mvdfv/meshio.hpp"

#include <ostream>

namespace mvd {

/// V-mesh. Vertices [0, T) are triangle circumcenters (vertex t belongs to
/// triangle t); vertices [T, T + B) are midpoints of the boundary edges.
struct VoronoiDual
{
    std::vector<Point2> vertices;
    std::size_t num_interior = 0;
    /// T .. T + B - 1.
    std::vector<Index> boundary_vertices;
    /// D-node pair (lo, hi) of each boundary vertex, in boundary_vertices order.
    std::vector<std::array<Index, 2>> boundary_edges;
    /// Per D-node, V-vertex indices of its cell in counterclockwise order.
    /// For a boundary node the chain starts and ends at edge midpoints.
    std::vector<std::vector<Index>> cells;
    /// Per D-node, the cell polygon clipped to the domain (counterclockwise).
    std::vector<std::vector<Point2>> cell_polygons;
    /// Triangles whose circumcenter is not strictly inside them. Only
    /// non-empty when built with allow_nonacute.
    std::vector<Index> outside_circumcenters;

    std::size_t num_vertices() const { return vertices.size(); }
};

/// Throws NonAcuteMesh unless the mesh passes validate_acute or
/// allow_nonacute is set.
VoronoiDual build_voronoi(const TriMesh& mesh, bool allow_nonacute = false);

struct MvdCell
{
    Point2 center;
    /// (i, i+) with i < i+; e_D points from i to i+.
    std::array<Index, 2> d_nodes{};
    /// (j, j+) ordered so that x_j+ - x_j points along e_V.
    std::array<Index, 2> v_nodes{};
    LocalFrame frame;
    double len_D = 0.0;
    double len_V = 0.0;
    double S_star = 0.0;
    bool is_boundary_degenerate = false;
};

/// A cell touching a node, with the sign of e_D (or e_V) against the outward
/// normal of the node's control volume on the face the cell's diagonal crosses.
struct Incidence
{
    Index cell;
    int sign;
};

struct OrientationSigns
{
    /// Indexed by D-node.
    std::vector<std::vector<Incidence>> d;
    /// Indexed by V-node; empty for boundary V-nodes, which carry no control
    /// volume.
    std::vector<std::vector<Incidence>> v;
};

struct MvdMesh
{
    TriMesh tri;
    VoronoiDual dual;
    /// One per Delaunay edge, in (lo, hi) order.
    std::vector<MvdCell> cells;
    /// Voronoi control-volume area per D-node.
    std::vector<double> S_D;
    /// Triangle area per V-node; zero on boundary V-nodes.
    std::vector<double> S_V;
    std::vector<bool> boundary_D;
    std::vector<bool> boundary_V;
    OrientationSigns signs;

    std::size_t num_D() const { return tri.nodes.size(); }
    std::size_t num_V() const { return dual.vertices.size(); }
    std::size_t num_cells() const { return cells.size(); }
    std::size_t num_boundary_cells() const;
    double domain_area() const { return tri.domain_area(); }
};

/// Throws ZeroLengthDiagonal when a Voronoi diagonal is shorter than
/// 1e-12 * scale. With allow_nonacute, cells whose diagonals miss each other
/// are centred on the intersection of the carrier lines.
MvdMesh build_mvd(const TriMesh& mesh, const VoronoiDual& dual, bool allow_nonacute = false);

/// build_voronoi followed by build_mvd.
MvdMesh build_mvd(const TriMesh& mesh, bool allow_nonacute = false);

/// Signs from geometry, checked to be +-1 within 1e-8.
OrientationSigns compute_orientation_signs(const MvdMesh& mvd);

/// One line per cell: index, D pair, V pair, center, len_D, len_V, S_star,
/// degenerate flag.
void dump_cells(std::ostream& out, const MvdMesh& mvd);

} // namespace mvd

#endif

/** \file meshio.hpp
 * \brief Triangle meshes: MSH 2.2 ASCII reader, internal rectangle generator,
 * and quality checks.
 */

#ifndef MVDFV_MESHIO_HPP
#define MVDFV_MESHIO_HPP

#include "mvdfv/errors.hpp"
#include "mvdfv/geometry.hpp"

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace mvd {

using Index = std::int32_t;

/// Primary (Delaunay) triangulation of a convex polygonal domain.
struct TriMesh
{
    std::vector<Point2> nodes;
    /// Counterclockwise index triples into nodes.
    std::vector<std::array<Index, 3>> triangles;
    /// Sorted, unique.
    std::vector<Index> boundary_nodes;
    /// Convex domain polygon, counterclockwise.
    std::vector<Point2> domain;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    /// Per-node flag derived from boundary_nodes.
    std::vector<bool> boundary_mask() const;
    double domain_area() const;
    double scale() const { return bbox_diagonal(nodes); }
};

struct QualityReport
{
    double min_angle = 0.0;
    double max_angle = 0.0;
    std::size_t num_obtuse_or_right = 0;
    bool is_acute = false;
};

class AcutenessNotAchieved : public Error
{
public:
    AcutenessNotAchieved(const std::string& what, QualityReport report)
        : Error(what), report_(report)
    {
    }
    const QualityReport& report() const { return report_; }

private:
    QualityReport report_;
};

struct Rectangle
{
    double x1_min = 0.0;
    double x2_min = 0.0;
    double x1_max = 1.0;
    double x2_max = 0.75;
};

/// Read a gmsh MSH 2.2 ASCII mesh. Line elements (type 1) mark the boundary;
/// when there are none, edges with a single incident triangle do. Point
/// elements (type 15) are ignored. The domain is the convex hull of the
/// boundary nodes. Throws ParseError subclasses (with line numbers) and
/// InvalidMesh.
TriMesh parse_msh(std::istream& in);
TriMesh parse_msh_file(const std::string& path);
TriMesh parse_msh_string(const std::string& text);

/// Acute Delaunay mesh of a rectangle. Points come from a hexagonal lattice
/// of spacing about target_h fitted to the sides; Lloyd smoothing of the
/// interior points runs only if the first triangulation is not acute.
TriMesh generate_rectangle_mesh(const Rectangle& domain, double target_h, int max_smoothing_iters = 200);

/// Delaunay triangulation of a point set (Bowyer-Watson with a super
/// triangle). The points must have a convex hull with nonzero area.
/// Result triangles are counterclockwise, sorted.
std::vector<std::array<Index, 3>> delaunay_triangulate(std::span<const Point2> points);

/// Equilateral triangle of unit side subdivided k times by midpoints.
/// k = 0 gives the single triangle.
TriMesh equilateral_mesh(int k);

/// Build a TriMesh from raw nodes and triangles: orients triangles
/// counterclockwise, derives the boundary from topology and the domain
/// from the convex hull, then validates.
TriMesh make_trimesh(std::vector<Point2> nodes, std::vector<std::array<Index, 3>> triangles);

QualityReport validate_acute(const TriMesh& mesh, double angle_tol = 0.5);

/// Index validity, consistent orientation, manifold edges, boundary nodes on
/// the domain boundary, and area covering. Throws InvalidMesh.
void check_trimesh(const TriMesh& mesh);

/// Undirected edges (lo, hi) with the number of incident triangles.
struct EdgeCount
{
    Index lo;
    Index hi;
    int count;
};
std::vector<EdgeCount> count_edges(const TriMesh& mesh);

} // namespace mvd

#endif

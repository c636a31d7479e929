#include "common.hpp"

#include <sstream>

using namespace mvd;
using testutil::close_rel;
using testutil::fixture_mvd;
using testutil::fixture_rows;

namespace {

Point2 centroid3(const TriMesh& m, const std::array<Index, 3>& t)
{
    const Point2 s = m.nodes[t[0]] + m.nodes[t[1]] + m.nodes[t[2]];
    return (1.0 / 3.0) * s;
}

/// Distance from p to the infinite line through a and b.
double line_distance(Point2 p, Point2 a, Point2 b) { return std::abs(cross(b - a, p - a)) / distance(a, b); }

void check_geometry(const MvdMesh& mvd)
{
    const double scale = mvd.tri.scale();
    const auto& D = mvd.tri.nodes;
    const auto& V = mvd.dual.vertices;
    double star_sum = 0.0;
    for (std::size_t m = 0; m < mvd.num_cells(); ++m) {
        CAPTURE(m);
        const MvdCell& c = mvd.cells[m];
        const Point2 d0 = D[c.d_nodes[0]], d1 = D[c.d_nodes[1]];
        const Point2 v0 = V[c.v_nodes[0]], v1 = V[c.v_nodes[1]];
        CHECK(c.d_nodes[0] < c.d_nodes[1]);
        CHECK(std::abs(c.len_D - distance(d0, d1)) <= 1e-14 * scale);
        CHECK(std::abs(c.len_V - distance(v0, v1)) <= 1e-14 * scale);
        // frame follows the diagonals
        CHECK(std::abs(dot(c.frame.e_D, (1.0 / c.len_D) * (d1 - d0)) - 1.0) < 1e-12);
        CHECK(dot(v1 - v0, c.frame.e_V) > 0.0);
        CHECK(std::abs(dot((1.0 / c.len_V) * (v1 - v0), c.frame.e_D)) < 1e-8);
        // the Voronoi edge is the perpendicular bisector of the Delaunay edge
        CHECK(distance(c.center, midpoint(d0, d1)) <= 1e-10 * scale);
        CHECK(line_distance(c.center, d0, d1) <= 1e-10 * scale);
        CHECK(line_distance(c.center, v0, v1) <= 1e-10 * scale);
        CHECK(close_rel(c.S_star, 0.5 * c.len_D * c.len_V, 1e-12));
        star_sum += c.S_star;
        CHECK(c.is_boundary_degenerate == (mvd.boundary_V[c.v_nodes[0]] || mvd.boundary_V[c.v_nodes[1]]));
    }
    const double area = mvd.domain_area();
    CHECK(std::abs(star_sum - area) <= 1e-12 * area);

    double sd = 0.0, sv = 0.0;
    for (double s : mvd.S_D)
        sd += s;
    for (double s : mvd.S_V)
        sv += s;
    CHECK(std::abs(sd - area) <= 1e-12 * area);
    CHECK(std::abs(sv - area) <= 1e-12 * area);

    // each cell puts half its area in the control volume of either D-node
    std::vector<double> half(mvd.num_D(), 0.0);
    for (const MvdCell& c : mvd.cells) {
        half[c.d_nodes[0]] += 0.5 * c.S_star;
        half[c.d_nodes[1]] += 0.5 * c.S_star;
    }
    for (std::size_t i = 0; i < mvd.num_D(); ++i)
        CHECK(close_rel(half[i], mvd.S_D[i], 1e-10));
}

void check_signs(const MvdMesh& mvd)
{
    // outward normals of a closed control volume sum to zero
    const double scale = mvd.tri.scale();
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        if (mvd.boundary_D[i])
            continue;
        Point2 s{0, 0};
        for (const Incidence& in : mvd.signs.d[i]) {
            CHECK(std::abs(in.sign) == 1);
            s = s + (in.sign * mvd.cells[in.cell].len_V) * mvd.cells[in.cell].frame.e_D;
        }
        CHECK(norm(s) <= 1e-12 * scale);
    }
    for (std::size_t j = 0; j < mvd.num_V(); ++j) {
        if (mvd.boundary_V[j]) {
            CHECK(mvd.signs.v[j].empty());
            continue;
        }
        CHECK(mvd.signs.v[j].size() == 3);
        Point2 s{0, 0};
        for (const Incidence& in : mvd.signs.v[j])
            s = s + (in.sign * mvd.cells[in.cell].len_D) * mvd.cells[in.cell].frame.e_V;
        CHECK(norm(s) <= 1e-12 * scale);
    }
    // the sign says whether e_D leaves node i
    for (std::size_t i = 0; i < mvd.num_D(); ++i)
        for (const Incidence& in : mvd.signs.d[i])
            CHECK(in.sign == (mvd.cells[in.cell].d_nodes[0] == static_cast<Index>(i) ? 1 : -1));
}

} // namespace

TEST_CASE("single triangle")
{
    const MvdMesh mvd = build_mvd(equilateral_mesh(0));
    CHECK(mvd.num_D() == 3);
    CHECK(mvd.num_V() == 4);
    CHECK(mvd.num_cells() == 3);
    CHECK(mvd.num_boundary_cells() == 3);
    for (const MvdCell& c : mvd.cells)
        CHECK(c.is_boundary_degenerate);
    // the three kites partition the triangle
    const double area = std::sqrt(3.0) / 4.0;
    for (const MvdCell& c : mvd.cells)
        CHECK(close_rel(c.S_star, area / 3.0, 1e-12));
    for (double s : mvd.S_D)
        CHECK(close_rel(s, area / 3.0, 1e-12));
    CHECK(close_rel(mvd.S_V[0], area, 1e-12));
    check_geometry(mvd);
}

TEST_CASE("subdivided equilateral triangle")
{
    const TriMesh tri = equilateral_mesh(1);
    const MvdMesh mvd = build_mvd(tri);
    CHECK(mvd.num_D() == 6);
    CHECK(mvd.num_V() == 10);
    CHECK(mvd.num_cells() == 9);
    CHECK(mvd.num_boundary_cells() == 6);
    // circumcenters of equilateral triangles are their centroids
    for (std::size_t t = 0; t < tri.num_triangles(); ++t)
        CHECK(distance(mvd.dual.vertices[t], centroid3(tri, tri.triangles[t])) < 1e-15);
    // boundary V-nodes are edge midpoints
    for (std::size_t k = 0; k < mvd.dual.boundary_vertices.size(); ++k) {
        const auto e = mvd.dual.boundary_edges[k];
        CHECK(distance(mvd.dual.vertices[mvd.dual.boundary_vertices[k]], midpoint(tri.nodes[e[0]], tri.nodes[e[1]])) <
              1e-15);
    }
    check_geometry(mvd);
    check_signs(mvd);

    const MvdMesh two = build_mvd(equilateral_mesh(2));
    CHECK(two.num_D() == 15);
    CHECK(two.num_V() == 28);
    CHECK(two.num_cells() == 30);
    check_geometry(two);
    check_signs(two);
}

TEST_CASE("fixture counts")
{
    for (const auto& row : fixture_rows()) {
        CAPTURE(row.row);
        const MvdMesh& mvd = fixture_mvd(row.row);
        CHECK(mvd.num_D() == row.M_D);
        CHECK(mvd.num_V() == row.M_V);
        CHECK(mvd.num_cells() == row.M);
        const std::size_t T = mvd.tri.num_triangles();
        const std::size_t B = mvd.tri.boundary_nodes.size();
        CHECK(mvd.num_V() == T + B);
        CHECK(mvd.num_boundary_cells() == B);
        CHECK(2 * mvd.num_cells() == 3 * T + B);
        CHECK(mvd.dual.outside_circumcenters.empty());
    }
    CHECK(fixture_mvd(1).num_boundary_cells() == 10);
}

TEST_CASE("fixture geometry: tiling, orthogonality and centers")
{
    for (const auto& row : fixture_rows()) {
        CAPTURE(row.row);
        check_geometry(fixture_mvd(row.row));
    }
}

TEST_CASE("fixture orientation signs")
{
    for (const auto& row : fixture_rows()) {
        CAPTURE(row.row);
        const MvdMesh& mvd = fixture_mvd(row.row);
        check_signs(mvd);
        const OrientationSigns again = compute_orientation_signs(mvd);
        CHECK(again.d.size() == mvd.signs.d.size());
        CHECK(again.v.size() == mvd.signs.v.size());
    }
}

TEST_CASE("Voronoi cells are counterclockwise and clipped to the domain")
{
    const MvdMesh& mvd = fixture_mvd(4);
    for (std::size_t i = 0; i < mvd.num_D(); ++i) {
        const auto& poly = mvd.dual.cell_polygons[i];
        CHECK(signed_area(poly) > 0.0);
        for (const Point2& p : poly) {
            CHECK(p.x1 >= -1e-12);
            CHECK(p.x1 <= 1.0 + 1e-12);
            CHECK(p.x2 >= -1e-12);
            CHECK(p.x2 <= 0.75 + 1e-12);
        }
        // the generating node is closest to every vertex of its cell
        for (const Point2& p : poly)
            for (std::size_t k = 0; k < mvd.num_D(); ++k)
                CHECK(distance(p, mvd.tri.nodes[i]) <= distance(p, mvd.tri.nodes[k]) + 1e-12);
    }
}

TEST_CASE("non-acute meshes")
{
    // right triangles: both circumcenters at the square center
    const TriMesh square = make_trimesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
    CHECK_THROWS_AS(build_mvd(square), NonAcuteMesh);
    CHECK_THROWS_AS(build_voronoi(square), NonAcuteMesh);
    CHECK_THROWS_AS(build_mvd(square, true), ZeroLengthDiagonal);

    const TriMesh obtuse = make_trimesh({{0, 0}, {4, 0}, {2, 1}}, {{0, 1, 2}});
    CHECK_THROWS_AS(build_voronoi(obtuse), NonAcuteMesh);
    const VoronoiDual dual = build_voronoi(obtuse, true);
    CHECK(dual.outside_circumcenters == std::vector<Index>{0});
    CHECK(distance(dual.vertices[0], {2.0, -1.5}) < 1e-12);
}

TEST_CASE("dump_cells writes a header and one line per cell")
{
    const MvdMesh& mvd = fixture_mvd(1);
    std::ostringstream out;
    dump_cells(out, mvd);
    std::istringstream in(out.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line))
        ++lines;
    CHECK(lines == mvd.num_cells() + 1);
}

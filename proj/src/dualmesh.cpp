#include "mvdfv/dualmesh.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace mvd {

namespace {

using EdgeKey = std::pair<Index, Index>;

EdgeKey edge_key(Index a, Index b) { return {std::min(a, b), std::max(a, b)}; }

/// Triangles around each node as (a, b, t) with (node, a, b) counterclockwise.
struct Fan
{
    Index a;
    Index b;
    Index t;
};

std::vector<std::vector<Fan>> node_fans(const TriMesh& mesh)
{
    std::vector<std::vector<Fan>> fans(mesh.nodes.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k)
            fans[tri[k]].push_back({tri[(k + 1) % 3], tri[(k + 2) % 3], static_cast<Index>(t)});
    }
    return fans;
}

bool strictly_inside(Point2 p, Point2 a, Point2 b, Point2 c)
{
    return orient2d(a, b, p) > 0.0 && orient2d(b, c, p) > 0.0 && orient2d(c, a, p) > 0.0;
}

} // namespace

VoronoiDual build_voronoi(const TriMesh& mesh, bool allow_nonacute)
{
    if (!allow_nonacute) {
        const QualityReport q = validate_acute(mesh);
        if (!q.is_acute)
            throw NonAcuteMesh("mesh has " + std::to_string(q.num_obtuse_or_right) +
                               " non-acute triangles (max angle " + std::to_string(q.max_angle) + ")");
    }

    VoronoiDual dual;
    const std::size_t T = mesh.triangles.size();
    dual.num_interior = T;
    dual.vertices.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& tri = mesh.triangles[t];
        const Point2 a = mesh.nodes[tri[0]];
        const Point2 b = mesh.nodes[tri[1]];
        const Point2 c = mesh.nodes[tri[2]];
        const Point2 cc = circumcenter(a, b, c);
        if (!strictly_inside(cc, a, b, c))
            dual.outside_circumcenters.push_back(static_cast<Index>(t));
        dual.vertices.push_back(cc);
    }

    std::map<EdgeKey, Index> midpoint_of;
    for (const EdgeCount& e : count_edges(mesh)) {
        if (e.count != 1)
            continue;
        const auto v = static_cast<Index>(dual.vertices.size());
        dual.vertices.push_back(midpoint(mesh.nodes[e.lo], mesh.nodes[e.hi]));
        dual.boundary_vertices.push_back(v);
        dual.boundary_edges.push_back({e.lo, e.hi});
        midpoint_of[{e.lo, e.hi}] = v;
    }

    const auto fans = node_fans(mesh);
    const auto mask = mesh.boundary_mask();
    dual.cells.resize(mesh.nodes.size());
    dual.cell_polygons.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const auto& fan = fans[i];
        if (fan.empty())
            throw InvalidMesh("node " + std::to_string(i) + " belongs to no triangle");
        std::map<Index, const Fan*> by_a;
        std::set<Index> ends;
        for (const Fan& f : fan) {
            by_a[f.a] = &f;
            ends.insert(f.b);
        }
        // an open fan starts at the one spoke that no triangle ends on
        const Fan* start = &fan.front();
        bool open = false;
        for (const Fan& f : fan) {
            if (!ends.count(f.a)) {
                start = &f;
                open = true;
                break;
            }
        }
        if (!open) {
            for (const Fan& f : fan)
                if (f.t < start->t)
                    start = &f;
        }

        auto& cell = dual.cells[i];
        const auto ii = static_cast<Index>(i);
        if (open)
            cell.push_back(midpoint_of.at(edge_key(ii, start->a)));
        const Fan* f = start;
        Index last_b = start->b;
        std::size_t walked = 0;
        do {
            cell.push_back(f->t);
            last_b = f->b;
            ++walked;
            const auto it = by_a.find(f->b);
            f = it == by_a.end() ? nullptr : it->second;
        } while (f != nullptr && f != start && walked <= fan.size());
        if (walked != fan.size())
            throw InvalidMesh("triangles around node " + std::to_string(i) + " do not form a single fan");
        if (open)
            cell.push_back(midpoint_of.at(edge_key(ii, last_b)));
        if (open != static_cast<bool>(mask[i]))
            throw InvalidMesh("boundary tag of node " + std::to_string(i) + " disagrees with the topology");

        std::vector<Point2> poly;
        if (open)
            poly.push_back(mesh.nodes[i]);
        for (Index v : cell)
            poly.push_back(dual.vertices[v]);
        dual.cell_polygons[i] = clip_convex(poly, mesh.domain);
    }
    return dual;
}

MvdMesh build_mvd(const TriMesh& mesh, const VoronoiDual& dual, bool allow_nonacute)
{
    const std::size_t T = mesh.triangles.size();
    if (dual.num_interior != T || dual.cells.size() != mesh.nodes.size() ||
        dual.vertices.size() != T + dual.boundary_vertices.size())
        throw MeshMismatch("Voronoi dual was not built from this mesh");

    MvdMesh mvd;
    mvd.tri = mesh;
    mvd.dual = dual;

    std::map<EdgeKey, std::array<Index, 2>> adjacent;
    for (std::size_t t = 0; t < T; ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            auto [it, fresh] = adjacent.try_emplace(edge_key(tri[k], tri[(k + 1) % 3]), std::array<Index, 2>{-1, -1});
            it->second[fresh ? 0 : 1] = static_cast<Index>(t);
        }
    }
    std::map<EdgeKey, Index> midpoint_of;
    for (std::size_t k = 0; k < dual.boundary_edges.size(); ++k)
        midpoint_of[{dual.boundary_edges[k][0], dual.boundary_edges[k][1]}] = dual.boundary_vertices[k];

    const double scale = mesh.scale();
    mvd.cells.reserve(adjacent.size());
    for (const auto& [edge, tris] : adjacent) {
        MvdCell c;
        c.d_nodes = {edge.first, edge.second};
        const Point2 p1 = mesh.nodes[edge.first];
        const Point2 p2 = mesh.nodes[edge.second];
        c.frame = LocalFrame::from_direction(p2 - p1);
        c.len_D = distance(p1, p2);

        Index va = tris[0];
        Index vb = tris[1];
        if (vb < 0) {
            const auto it = midpoint_of.find(edge);
            if (it == midpoint_of.end())
                throw MeshMismatch("boundary edge without a Voronoi midpoint vertex");
            vb = it->second;
            c.is_boundary_degenerate = true;
        }
        if (dot(dual.vertices[vb] - dual.vertices[va], c.frame.e_V) < 0.0)
            std::swap(va, vb);
        c.v_nodes = {va, vb};
        const Point2 q1 = dual.vertices[va];
        const Point2 q2 = dual.vertices[vb];
        c.len_V = distance(q1, q2);
        const auto m = mvd.cells.size();
        if (c.len_V < 1e-12 * scale)
            throw ZeroLengthDiagonal("cell " + std::to_string(m) + " on edge (" + std::to_string(edge.first) +
                                     ", " + std::to_string(edge.second) + ") has a zero-length Voronoi diagonal");
        try {
            c.center = diagonal_intersection(p1, p2, q1, q2);
        }
        catch (const NonIntersecting&) {
            if (!allow_nonacute)
                throw;
            c.center = line_intersection(p1, p2, q1, q2);
        }
        c.S_star = 0.5 * c.len_D * c.len_V;
        mvd.cells.push_back(c);
    }

    mvd.S_D.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        mvd.S_D[i] = signed_area(dual.cell_polygons[i]);
    mvd.S_V.assign(dual.vertices.size(), 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& tri = mesh.triangles[t];
        mvd.S_V[t] = 0.5 * orient2d(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    }
    mvd.boundary_D = mesh.boundary_mask();
    mvd.boundary_V.assign(dual.vertices.size(), false);
    for (Index v : dual.boundary_vertices)
        mvd.boundary_V[v] = true;
    mvd.signs = compute_orientation_signs(mvd);
    return mvd;
}

MvdMesh build_mvd(const TriMesh& mesh, bool allow_nonacute)
{
    return build_mvd(mesh, build_voronoi(mesh, allow_nonacute), allow_nonacute);
}

std::size_t MvdMesh::num_boundary_cells() const
{
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const MvdCell& c) { return c.is_boundary_degenerate; }));
}

namespace {

int rounded_sign(double s, const char* what, std::size_t m)
{
    if (std::abs(std::abs(s) - 1.0) > 1e-8)
        throw InvalidMesh(std::string(what) + " normal not aligned with the diagonal in cell " + std::to_string(m));
    return s > 0.0 ? 1 : -1;
}

} // namespace

OrientationSigns compute_orientation_signs(const MvdMesh& mvd)
{
    OrientationSigns signs;
    signs.d.resize(mvd.num_D());
    signs.v.resize(mvd.num_V());
    const auto& nodes = mvd.tri.nodes;
    for (std::size_t m = 0; m < mvd.cells.size(); ++m) {
        const MvdCell& c = mvd.cells[m];
        const auto cell = static_cast<Index>(m);
        // the Voronoi face of node i in this cell is the bisector of the
        // edge, so its outward normal points at the other endpoint
        for (int k = 0; k < 2; ++k) {
            const Index i = c.d_nodes[k];
            const Point2 out = nodes[c.d_nodes[1 - k]] - nodes[i];
            const double s = dot(c.frame.e_D, (1.0 / norm(out)) * out);
            signs.d[i].push_back({cell, rounded_sign(s, "Voronoi", m)});
        }
        // the triangle face is the Delaunay edge; outward is away from the
        // triangle's centroid
        const Point2 mid = midpoint(nodes[c.d_nodes[0]], nodes[c.d_nodes[1]]);
        for (Index j : c.v_nodes) {
            if (mvd.boundary_V[j])
                continue;
            const auto& tri = mvd.tri.triangles[j];
            const Point2 centroid = (1.0 / 3.0) * (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]);
            Point2 n = rotate_ccw(c.frame.e_D);
            if (dot(n, mid - centroid) < 0.0)
                n = -1.0 * n;
            const Point2 diag = mvd.dual.vertices[c.v_nodes[1]] - mvd.dual.vertices[c.v_nodes[0]];
            const double s = dot((1.0 / norm(diag)) * diag, n);
            signs.v[j].push_back({cell, rounded_sign(s, "triangle", m)});
        }
    }
    return signs;
}

void dump_cells(std::ostream& out, const MvdMesh& mvd)
{
    out << "# m i i+ j j+ x1 x2 len_D len_V S_star degenerate\n";
    char buf[320];
    for (std::size_t m = 0; m < mvd.cells.size(); ++m) {
        const MvdCell& c = mvd.cells[m];
        std::snprintf(buf, sizeof buf, "%zu %d %d %d %d %.17g %.17g %.17g %.17g %.17g %d\n", m, c.d_nodes[0],
                      c.d_nodes[1], c.v_nodes[0], c.v_nodes[1], c.center.x1, c.center.x2, c.len_D, c.len_V,
                      c.S_star, c.is_boundary_degenerate ? 1 : 0);
        out << buf;
    }
}

} // namespace mvd

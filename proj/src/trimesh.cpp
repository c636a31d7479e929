#include "mvdfv/meshio.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mvd {

std::vector<bool> TriMesh::boundary_mask() const
{
    std::vector<bool> mask(nodes.size(), false);
    for (Index i : boundary_nodes)
        mask[i] = true;
    return mask;
}

double TriMesh::domain_area() const
{
    return domain.size() >= 3 ? signed_area(domain) : 0.0;
}

std::vector<EdgeCount> count_edges(const TriMesh& mesh)
{
    std::map<std::pair<Index, Index>, int> counts;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Index a = t[k];
            const Index b = t[(k + 1) % 3];
            ++counts[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::vector<EdgeCount> out;
    out.reserve(counts.size());
    for (const auto& [e, c] : counts)
        out.push_back({e.first, e.second, c});
    return out;
}

namespace {

double distance_to_polygon(Point2 p, const std::vector<Point2>& poly)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < poly.size(); ++k)
        best = std::min(best, segment_distance(p, poly[k], poly[(k + 1) % poly.size()]));
    return best;
}

} // namespace

void check_trimesh(const TriMesh& mesh)
{
    const auto n = static_cast<Index>(mesh.nodes.size());
    if (mesh.triangles.empty())
        throw InvalidMesh("mesh has no triangles");
    if (mesh.domain.size() < 3)
        throw InvalidMesh("domain polygon has fewer than 3 vertices");
    for (const Point2& p : mesh.nodes)
        if (!std::isfinite(p.x1) || !std::isfinite(p.x2))
            throw InvalidMesh("non-finite node coordinate");

    const double scale = mesh.scale();
    double area_sum = 0.0;
    std::set<std::pair<Index, Index>> directed;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (Index v : tri)
            if (v < 0 || v >= n)
                throw InvalidMesh("triangle " + std::to_string(t) + " references node " + std::to_string(v));
        const double area = 0.5 * orient2d(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
        if (!(area > area_eps(scale)))
            throw InvalidMesh("triangle " + std::to_string(t) + " is degenerate or clockwise");
        area_sum += area;
        for (int k = 0; k < 3; ++k)
            if (!directed.insert({tri[k], tri[(k + 1) % 3]}).second)
                throw InvalidMesh("edge traversed twice in the same direction (overlap or inconsistent "
                                  "orientation) at triangle " + std::to_string(t));
    }

    const double tol = 1e-9 * scale;
    const auto mask = mesh.boundary_mask();
    for (Index i : mesh.boundary_nodes) {
        if (i < 0 || i >= n)
            throw InvalidMesh("boundary node index out of range");
        if (distance_to_polygon(mesh.nodes[i], mesh.domain) > tol)
            throw InvalidMesh("boundary node " + std::to_string(i) + " is not on the domain boundary");
    }
    for (const EdgeCount& e : count_edges(mesh)) {
        if (e.count == 1) {
            if (!mask[e.lo] || !mask[e.hi])
                throw InvalidMesh("boundary edge (" + std::to_string(e.lo) + ", " + std::to_string(e.hi) +
                                  ") has an endpoint not tagged as boundary");
            if (distance_to_polygon(midpoint(mesh.nodes[e.lo], mesh.nodes[e.hi]), mesh.domain) > tol)
                throw InvalidMesh("open edge inside the domain (hole or gap)");
        }
    }

    const double domain_area = mesh.domain_area();
    if (std::abs(area_sum - domain_area) > 1e-10 * domain_area)
        throw InvalidMesh("triangle areas sum to " + std::to_string(area_sum) + " but the domain area is " +
                          std::to_string(domain_area));
}

QualityReport validate_acute(const TriMesh& mesh, double angle_tol)
{
    QualityReport r;
    r.min_angle = 180.0;
    r.max_angle = 0.0;
    for (const auto& t : mesh.triangles) {
        const auto angles = triangle_angles(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
        bool bad = false;
        for (double a : angles) {
            r.min_angle = std::min(r.min_angle, a);
            r.max_angle = std::max(r.max_angle, a);
            bad = bad || a >= 90.0 - angle_tol;
        }
        if (bad)
            ++r.num_obtuse_or_right;
    }
    r.is_acute = r.num_obtuse_or_right == 0;
    return r;
}

TriMesh make_trimesh(std::vector<Point2> nodes, std::vector<std::array<Index, 3>> triangles)
{
    TriMesh mesh;
    mesh.nodes = std::move(nodes);
    mesh.triangles = std::move(triangles);
    for (auto& t : mesh.triangles)
        if (orient2d(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) < 0.0)
            std::swap(t[1], t[2]);
    std::set<Index> b;
    for (const EdgeCount& e : count_edges(mesh)) {
        if (e.count == 1) {
            b.insert(e.lo);
            b.insert(e.hi);
        }
    }
    mesh.boundary_nodes.assign(b.begin(), b.end());
    std::vector<Point2> bpts;
    for (Index i : mesh.boundary_nodes)
        bpts.push_back(mesh.nodes[i]);
    mesh.domain = convex_hull(bpts);
    check_trimesh(mesh);
    return mesh;
}

TriMesh equilateral_mesh(int k)
{
    if (k < 0 || k > 10)
        throw InvalidMesh("subdivision level must be in [0, 10]");
    const int n = 1 << k;
    const double h = 1.0 / n;
    const Point2 a{h, 0.0};
    const Point2 b{0.5 * h, 0.5 * std::sqrt(3.0) * h};

    // lattice node (p, q) with p + q <= n, row by row
    std::vector<Point2> nodes;
    std::vector<std::vector<Index>> id(n + 1, std::vector<Index>(n + 1, -1));
    for (int q = 0; q <= n; ++q) {
        for (int p = 0; p + q <= n; ++p) {
            id[p][q] = static_cast<Index>(nodes.size());
            nodes.push_back(static_cast<double>(p) * a + static_cast<double>(q) * b);
        }
    }
    std::vector<std::array<Index, 3>> tris;
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p + q < n; ++p) {
            tris.push_back({id[p][q], id[p + 1][q], id[p][q + 1]});
            if (p + q + 1 < n)
                tris.push_back({id[p + 1][q], id[p + 1][q + 1], id[p][q + 1]});
        }
    }
    return make_trimesh(std::move(nodes), std::move(tris));
}

} // namespace mvd

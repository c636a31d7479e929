#include "mvdfv/meshio.hpp"

#include <algorithm>
#include <numbers>
#include <unordered_map>

namespace mvd {

namespace {

struct BwTriangle
{
    std::array<Index, 3> v;
    /// nbr[k] lies across the edge opposite v[k]; -1 on the hull.
    std::array<Index, 3> nbr{-1, -1, -1};
    bool alive = true;
};

/// Positive when d lies strictly inside the circumcircle of the
/// counterclockwise triangle (a, b, c).
long double incircle(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const long double adx = static_cast<long double>(a.x1) - d.x1;
    const long double ady = static_cast<long double>(a.x2) - d.x2;
    const long double bdx = static_cast<long double>(b.x1) - d.x1;
    const long double bdy = static_cast<long double>(b.x2) - d.x2;
    const long double cdx = static_cast<long double>(c.x1) - d.x1;
    const long double cdy = static_cast<long double>(c.x2) - d.x2;
    const long double ad = adx * adx + ady * ady;
    const long double bd = bdx * bdx + bdy * bdy;
    const long double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

class BowyerWatson
{
public:
    explicit BowyerWatson(std::span<const Point2> points) : pts_(points.begin(), points.end())
    {
        const double scale = std::max(bbox_diagonal(points), 1e-300);
        Point2 lo = points[0];
        Point2 hi = points[0];
        for (const Point2& p : points) {
            lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2)};
            hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2)};
        }
        const Point2 c = midpoint(lo, hi);
        const double r = 100.0 * scale;
        super_ = static_cast<Index>(pts_.size());
        pts_.push_back({c.x1 - 2.0 * r, c.x2 - r});
        pts_.push_back({c.x1 + 2.0 * r, c.x2 - r});
        pts_.push_back({c.x1, c.x2 + 2.0 * r});
        tris_.push_back({{super_, super_ + 1, super_ + 2}});
    }

    void insert(Index p)
    {
        const Point2 x = pts_[p];
        const Index start = locate(x);

        cavity_.clear();
        stack_.clear();
        stack_.push_back(start);
        mark(start);
        while (!stack_.empty()) {
            const Index t = stack_.back();
            stack_.pop_back();
            cavity_.push_back(t);
            for (Index nb : tris_[t].nbr) {
                if (nb < 0 || marked(nb))
                    continue;
                const auto& v = tris_[nb].v;
                if (incircle(pts_[v[0]], pts_[v[1]], pts_[v[2]], x) > 0.0L) {
                    mark(nb);
                    stack_.push_back(nb);
                }
            }
        }

        // fan the cavity boundary to p
        std::unordered_map<Index, Index> by_start;
        std::unordered_map<Index, Index> by_end;
        std::vector<Index> created;
        for (Index t : cavity_) {
            for (int k = 0; k < 3; ++k) {
                const Index nb = tris_[t].nbr[k];
                if (nb >= 0 && marked(nb))
                    continue;
                const Index a = tris_[t].v[(k + 1) % 3];
                const Index b = tris_[t].v[(k + 2) % 3];
                BwTriangle fresh;
                fresh.v = {a, b, p};
                fresh.nbr[2] = nb;
                const Index id = allocate(fresh);
                if (nb >= 0) {
                    for (Index& back : tris_[nb].nbr)
                        if (back == t)
                            back = id;
                }
                by_start[a] = id;
                by_end[b] = id;
                created.push_back(id);
            }
        }
        for (Index id : created) {
            // edge (b, p) is opposite a; edge (p, a) is opposite b
            const Index a = tris_[id].v[0];
            const Index b = tris_[id].v[1];
            tris_[id].nbr[0] = by_start.at(b);
            tris_[id].nbr[1] = by_end.at(a);
        }
        for (Index t : cavity_) {
            tris_[t].alive = false;
            free_.push_back(t);
        }
        for (Index t : cavity_)
            unmark(t);
        last_ = created.front();
    }

    std::vector<std::array<Index, 3>> result() const
    {
        std::vector<std::array<Index, 3>> out;
        for (const BwTriangle& t : tris_) {
            if (!t.alive)
                continue;
            if (t.v[0] >= super_ || t.v[1] >= super_ || t.v[2] >= super_)
                continue;
            // canonical rotation: smallest index first
            auto v = t.v;
            std::rotate(v.begin(), std::min_element(v.begin(), v.end()), v.end());
            out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    Index allocate(const BwTriangle& t)
    {
        if (!free_.empty()) {
            const Index id = free_.back();
            free_.pop_back();
            tris_[id] = t;
            return id;
        }
        tris_.push_back(t);
        return static_cast<Index>(tris_.size() - 1);
    }

    void mark(Index t)
    {
        if (static_cast<std::size_t>(t) >= in_cavity_.size())
            in_cavity_.resize(tris_.size() * 2 + 16, false);
        in_cavity_[t] = true;
    }
    bool marked(Index t) const
    {
        return static_cast<std::size_t>(t) < in_cavity_.size() && in_cavity_[t];
    }
    void unmark(Index t) { in_cavity_[t] = false; }

    /// Triangle containing x, by straight walk from the last insertion.
    Index locate(Point2 x) const
    {
        Index t = last_;
        if (t < 0 || !tris_[t].alive)
            t = first_alive();
        for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            const auto& tri = tris_[t];
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const Point2 a = pts_[tri.v[(k + 1) % 3]];
                const Point2 b = pts_[tri.v[(k + 2) % 3]];
                if (orient2d(a, b, x) < 0.0 && tri.nbr[k] >= 0) {
                    t = tri.nbr[k];
                    moved = true;
                    break;
                }
            }
            if (!moved)
                return t;
        }
        // walk cycled on degenerate input; fall back to a scan
        for (std::size_t s = 0; s < tris_.size(); ++s) {
            const auto& tri = tris_[s];
            if (!tri.alive)
                continue;
            if (orient2d(pts_[tri.v[0]], pts_[tri.v[1]], x) >= 0.0 &&
                orient2d(pts_[tri.v[1]], pts_[tri.v[2]], x) >= 0.0 &&
                orient2d(pts_[tri.v[2]], pts_[tri.v[0]], x) >= 0.0)
                return static_cast<Index>(s);
        }
        throw InvalidMesh("point location failed during triangulation");
    }

    Index first_alive() const
    {
        for (std::size_t s = 0; s < tris_.size(); ++s)
            if (tris_[s].alive)
                return static_cast<Index>(s);
        return -1;
    }

    std::vector<Point2> pts_;
    std::vector<BwTriangle> tris_;
    std::vector<Index> free_;
    std::vector<bool> in_cavity_;
    std::vector<Index> cavity_;
    std::vector<Index> stack_;
    Index super_ = 0;
    Index last_ = 0;
};

struct Seeds
{
    std::vector<Point2> points;
    /// Points [0, num_boundary) are fixed boundary points.
    std::size_t num_boundary = 0;
};

Seeds seed_rectangle(const Rectangle& r, double h)
{
    const double width = r.x1_max - r.x1_min;
    const double height = r.x2_max - r.x2_min;
    // hexagonal rows; an even count puts shifted rows next to both
    // horizontal sides
    const double ideal = 0.5 * std::sqrt(3.0);
    const int rows = std::max(2, 2 * static_cast<int>(std::floor(height / (2.0 * ideal * h))));
    const double ry = height / rows;
    // column count keeping ry / dx closest to the equilateral ratio
    const double cols = width * ideal / ry;
    int nx = std::max(1, static_cast<int>(std::floor(cols)));
    if (std::abs(ry * (nx + 1) / width - ideal) < std::abs(ry * nx / width - ideal))
        ++nx;
    const double dx = width / nx;

    Seeds s;
    const auto add = [&](double x, double y) { s.points.push_back({r.x1_min + x, r.x2_min + y}); };
    // counterclockwise along the boundary from the lower-left corner; side
    // points sit halfway between lattice rows, skipping the half rows next
    // to the corners
    for (int i = 0; i <= nx; ++i)
        add(i * dx, 0.0);
    for (int k = 1; k < rows - 1; ++k)
        add(width, (k + 0.5) * ry);
    for (int i = nx; i >= 0; --i)
        add(i * dx, height);
    for (int k = rows - 2; k >= 1; --k)
        add(0.0, (k + 0.5) * ry);
    s.num_boundary = s.points.size();

    // In the rows next to a horizontal side, the point nearest each corner is
    // pulled inward so the corner angle is split into two acute ones.
    const double first_side = rows > 2 ? 1.5 * ry : 2.0 * ry;
    const double corner_x =
        std::min(0.95 * dx, std::max(0.7 * dx, 1.05 * std::sqrt(ry * (first_side - ry))));
    const double margin = 0.3 * dx;
    for (int k = 1; k < rows; ++k) {
        const double shift = (k % 2 == 1) ? 0.5 : 0.0;
        const bool next_to_side = k == 1 || k == rows - 1;
        for (int i = 0; i <= nx; ++i) {
            double x = (i + shift) * dx;
            if (x < margin || width - x < margin)
                continue;
            if (next_to_side && x < dx)
                x = corner_x;
            else if (next_to_side && width - x < dx)
                x = width - corner_x;
            add(x, k * ry);
        }
    }
    return s;
}

TriMesh triangulate_rectangle(const Rectangle& r, const std::vector<Point2>& points)
{
    auto tris = delaunay_triangulate(points);
    TriMesh mesh;
    mesh.nodes = points;
    mesh.triangles = std::move(tris);
    std::vector<Index> b;
    const double tol = 1e-12 * std::hypot(r.x1_max - r.x1_min, r.x2_max - r.x2_min);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2 p = points[i];
        if (std::abs(p.x1 - r.x1_min) <= tol || std::abs(p.x1 - r.x1_max) <= tol ||
            std::abs(p.x2 - r.x2_min) <= tol || std::abs(p.x2 - r.x2_max) <= tol)
            b.push_back(static_cast<Index>(i));
    }
    mesh.boundary_nodes = std::move(b);
    mesh.domain = {{r.x1_min, r.x2_min}, {r.x1_max, r.x2_min}, {r.x1_max, r.x2_max}, {r.x1_min, r.x2_max}};
    check_trimesh(mesh);
    return mesh;
}

/// Move every interior point to the centroid of its Voronoi cell clipped to
/// the domain.
void lloyd_step(TriMesh& mesh, std::size_t num_fixed)
{
    const std::size_t n = mesh.nodes.size();
    std::vector<std::vector<Point2>> ring(n);
    for (const auto& t : mesh.triangles) {
        const Point2 c = circumcenter(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
        for (Index v : t)
            ring[v].push_back(c);
    }
    std::vector<Point2> moved = mesh.nodes;
    for (std::size_t i = num_fixed; i < n; ++i) {
        auto& cell = ring[i];
        const Point2 x = mesh.nodes[i];
        std::sort(cell.begin(), cell.end(), [x](Point2 a, Point2 b) {
            return std::atan2(a.x2 - x.x2, a.x1 - x.x1) < std::atan2(b.x2 - x.x2, b.x1 - x.x1);
        });
        const auto clipped = clip_convex(cell, mesh.domain);
        if (clipped.size() >= 3 && signed_area(clipped) > 0.0)
            moved[i] = polygon_centroid(clipped);
    }
    mesh.nodes = std::move(moved);
}

} // namespace

std::vector<std::array<Index, 3>> delaunay_triangulate(std::span<const Point2> points)
{
    if (points.size() < 3)
        throw InvalidMesh("triangulation needs at least 3 points");
    BowyerWatson bw(points);
    for (std::size_t i = 0; i < points.size(); ++i)
        bw.insert(static_cast<Index>(i));
    return bw.result();
}

TriMesh generate_rectangle_mesh(const Rectangle& domain, double target_h, int max_smoothing_iters)
{
    const double width = domain.x1_max - domain.x1_min;
    const double height = domain.x2_max - domain.x2_min;
    if (!(width > 0.0) || !(height > 0.0))
        throw InvalidMesh("rectangle must have positive extent");
    if (!(target_h > 0.0) || target_h >= std::min(width, height))
        throw InvalidMesh("target_h must be positive and smaller than the shorter side");

    const Seeds seeds = seed_rectangle(domain, target_h);
    TriMesh mesh = triangulate_rectangle(domain, seeds.points);
    QualityReport report = validate_acute(mesh);
    for (int it = 0; it < max_smoothing_iters && !report.is_acute; ++it) {
        lloyd_step(mesh, seeds.num_boundary);
        mesh = triangulate_rectangle(domain, mesh.nodes);
        report = validate_acute(mesh);
    }
    if (!report.is_acute)
        throw AcutenessNotAchieved("mesh not acute after " + std::to_string(max_smoothing_iters) +
                                       " smoothing iterations (max angle " + std::to_string(report.max_angle) +
                                       ")",
                                   report);
    return mesh;
}

} // namespace mvd

#include "mvdfv/geometry.hpp"

#include "mvdfv/errors.hpp"

#include <algorithm>
#include <numbers>

namespace mvd {

double Tensor2::max_abs() const
{
    return std::max({std::abs(k11), std::abs(k12), std::abs(k21), std::abs(k22)});
}

bool Tensor2::is_symmetric(double rel_tol) const
{
    return std::abs(k12 - k21) <= rel_tol * max_abs();
}

bool Tensor2::is_spd() const
{
    return is_symmetric() && k11 > 0.0 && det() > 0.0;
}

std::array<double, 2> Tensor2::eigenvalues() const
{
    const double off = 0.5 * (k12 + k21);
    const double mean = 0.5 * (k11 + k22);
    const double half_gap = std::hypot(0.5 * (k11 - k22), off);
    // the smaller root via det/larger avoids cancellation
    const double big = mean >= 0.0 ? mean + half_gap : mean - half_gap;
    const double small = big != 0.0 ? (k11 * k22 - off * off) / big : 0.0;
    return big >= small ? std::array{small, big} : std::array{big, small};
}

LocalFrame LocalFrame::from_angle(double theta)
{
    const Point2 e_D{std::cos(theta), std::sin(theta)};
    return {e_D, rotate_ccw(e_D), theta};
}

LocalFrame LocalFrame::from_direction(Point2 d)
{
    const double len = norm(d);
    const Point2 e_D{d.x1 / len, d.x2 / len};
    return {e_D, rotate_ccw(e_D), std::atan2(e_D.x2, e_D.x1)};
}

namespace {

double local_scale(Point2 a, Point2 b, Point2 c)
{
    const std::array pts{a, b, c};
    return bbox_diagonal(pts);
}

void require_nondegenerate(Point2 a, Point2 b, Point2 c)
{
    const double area2 = orient2d(a, b, c);
    const double scale = local_scale(a, b, c);
    if (!(std::abs(0.5 * area2) > area_eps(scale)))
        throw DegenerateTriangle("degenerate triangle: signed area " + std::to_string(0.5 * area2));
}

} // namespace

Point2 circumcenter(Point2 a, Point2 b, Point2 c)
{
    require_nondegenerate(a, b, c);
    // relative to a for accuracy
    const Point2 ba = b - a;
    const Point2 ca = c - a;
    const double bl = dot(ba, ba);
    const double cl = dot(ca, ca);
    const double d = 2.0 * cross(ba, ca);
    const double ux = (ca.x2 * bl - ba.x2 * cl) / d;
    const double uy = (ba.x1 * cl - ca.x1 * bl) / d;
    return {a.x1 + ux, a.x2 + uy};
}

std::array<double, 3> triangle_angles(Point2 a, Point2 b, Point2 c)
{
    require_nondegenerate(a, b, c);
    const auto angle_at = [](Point2 p, Point2 q, Point2 r) {
        const Point2 u = q - p;
        const Point2 v = r - p;
        // atan2 keeps accuracy near 0 and 180 degrees
        return std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / std::numbers::pi;
    };
    const double alpha = angle_at(a, b, c);
    const double beta = angle_at(b, c, a);
    return {alpha, beta, 180.0 - alpha - beta};
}

double signed_area(std::span<const Point2> vertices)
{
    const std::size_t n = vertices.size();
    if (n < 3)
        return 0.0;
    const Point2 origin = vertices[0];
    double twice = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Point2 p = vertices[k] - origin;
        const Point2 q = vertices[(k + 1) % n] - origin;
        twice += cross(p, q);
    }
    return 0.5 * twice;
}

double polygon_area(std::span<const Point2> vertices)
{
    if (vertices.size() < 3)
        throw TooFewVertices("polygon needs at least 3 vertices, got " + std::to_string(vertices.size()));
    const double area = signed_area(vertices);
    if (area < 0.0)
        throw NegativeArea("polygon is clockwise (signed area " + std::to_string(area) + ")");
    return area;
}

Tensor2 rotate_tensor(const Tensor2& K, double theta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Q K
    const double a11 = c * K.k11 + s * K.k21;
    const double a12 = c * K.k12 + s * K.k22;
    const double a21 = -s * K.k11 + c * K.k21;
    const double a22 = -s * K.k12 + c * K.k22;
    // (Q K) Q^T
    Tensor2 r;
    r.k11 = a11 * c + a12 * s;
    r.k12 = -a11 * s + a12 * c;
    r.k21 = a21 * c + a22 * s;
    r.k22 = -a21 * s + a22 * c;
    if (K.k12 == K.k21) {
        // exact symmetry in gives exact symmetry out
        const double off = 0.5 * (r.k12 + r.k21);
        r.k12 = off;
        r.k21 = off;
    }
    return r;
}

Point2 line_intersection(Point2 p1, Point2 p2, Point2 q1, Point2 q2)
{
    const Point2 dp = p2 - p1;
    const Point2 dq = q2 - q1;
    const double denom = cross(dp, dq);
    if (denom == 0.0)
        throw NonIntersecting("parallel lines");
    const double t = cross(q1 - p1, dq) / denom;
    return p1 + t * dp;
}

Point2 diagonal_intersection(Point2 p1, Point2 p2, Point2 q1, Point2 q2, double orth_tol)
{
    const Point2 dp = p2 - p1;
    const Point2 dq = q2 - q1;
    const double lp = norm(dp);
    const double lq = norm(dq);
    if (lp == 0.0 || lq == 0.0)
        throw NonIntersecting("zero-length diagonal");
    const double cosine = dot(dp, dq) / (lp * lq);
    if (std::abs(cosine) > orth_tol)
        throw NonOrthogonal("diagonals not orthogonal, |cos| = " + std::to_string(std::abs(cosine)),
                            std::abs(cosine));
    const double denom = cross(dp, dq);
    const double t = cross(q1 - p1, dq) / denom;
    const double u = cross(q1 - p1, dp) / denom;
    constexpr double slack = 1e-10;
    if (t < -slack || t > 1.0 + slack || u < -slack || u > 1.0 + slack)
        throw NonIntersecting("diagonals meet outside the cell");
    // project onto the D segment, then snap endpoints so boundary cells hit
    // the midpoint exactly
    if (u <= 0.0)
        return q1;
    if (u >= 1.0)
        return q2;
    return p1 + t * dp;
}

std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> clip)
{
    std::vector<Point2> output(subject.begin(), subject.end());
    const std::size_t nc = clip.size();
    const double scale = bbox_diagonal(clip);
    const double tol = 1e-14 * scale * scale;
    for (std::size_t e = 0; e < nc && !output.empty(); ++e) {
        const Point2 a = clip[e];
        const Point2 b = clip[(e + 1) % nc];
        const auto inside = [&](Point2 p) { return orient2d(a, b, p) >= -tol; };
        std::vector<Point2> input;
        input.swap(output);
        for (std::size_t k = 0; k < input.size(); ++k) {
            const Point2 cur = input[k];
            const Point2 prev = input[(k + input.size() - 1) % input.size()];
            const bool cin = inside(cur);
            const bool pin = inside(prev);
            if (cin) {
                if (!pin)
                    output.push_back(line_intersection(prev, cur, a, b));
                output.push_back(cur);
            }
            else if (pin) {
                output.push_back(line_intersection(prev, cur, a, b));
            }
        }
    }
    return output;
}

Point2 polygon_centroid(std::span<const Point2> vertices)
{
    const std::size_t n = vertices.size();
    const Point2 origin = vertices[0];
    double area2 = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Point2 p = vertices[k] - origin;
        const Point2 q = vertices[(k + 1) % n] - origin;
        const double w = cross(p, q);
        area2 += w;
        cx += (p.x1 + q.x1) * w;
        cy += (p.x2 + q.x2) * w;
    }
    return {origin.x1 + cx / (3.0 * area2), origin.x2 + cy / (3.0 * area2)};
}

std::vector<Point2> convex_hull(std::span<const Point2> points, double rel_tol)
{
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 < b.x2);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;
    const double scale = bbox_diagonal(pts);
    // cross(b - a, p - a) / |b - a| is the distance of p from line ab
    const auto keeps_turn = [&](Point2 a, Point2 b, Point2 p) {
        return orient2d(a, b, p) > rel_tol * scale * distance(a, p);
    };
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && !keeps_turn(hull[k - 2], hull[k - 1], p))
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Point2 p = pts[i];
        while (k >= lower && !keeps_turn(hull[k - 2], hull[k - 1], p))
            --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

double segment_distance(Point2 p, Point2 a, Point2 b)
{
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double bbox_diagonal(std::span<const Point2> points)
{
    if (points.empty())
        return 0.0;
    double lo1 = points[0].x1, hi1 = points[0].x1, lo2 = points[0].x2, hi2 = points[0].x2;
    for (const Point2& p : points) {
        lo1 = std::min(lo1, p.x1);
        hi1 = std::max(hi1, p.x1);
        lo2 = std::min(lo2, p.x2);
        hi2 = std::max(hi2, p.x2);
    }
    return std::hypot(hi1 - lo1, hi2 - lo2);
}

} // namespace mvd

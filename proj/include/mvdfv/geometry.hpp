/** \file geometry.hpp
 * \brief Planar primitives used by mesh construction and by the operator coefficients.
 */

#ifndef MVDFV_GEOMETRY_HPP
#define MVDFV_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace mvd {

struct Point2
{
    double x1 = 0.0;
    double x2 = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)}; }

/// Counterclockwise rotation by +pi/2.
inline Point2 rotate_ccw(Point2 a) { return {-a.x2, a.x1}; }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Rank-two tensor in row-major order. As a diffusion tensor it must be
/// symmetric positive definite; in a local cell frame the entries read
/// (k_DD, k_DV, k_VD, k_VV).
struct Tensor2
{
    double k11 = 1.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 1.0;

    double trace() const { return k11 + k22; }
    double det() const { return k11 * k22 - k12 * k21; }
    double max_abs() const;
    bool is_symmetric(double rel_tol = 1e-12) const;
    /// k11 > 0 and det > 0, plus symmetry.
    bool is_spd() const;
    /// Eigenvalues of the symmetric part, ascending.
    std::array<double, 2> eigenvalues() const;
    Point2 apply(Point2 v) const { return {k11 * v.x1 + k12 * v.x2, k21 * v.x1 + k22 * v.x2}; }

    friend bool operator==(const Tensor2&, const Tensor2&) = default;
};

/// Orthonormal cell frame. theta is the counterclockwise angle from the
/// x1-axis to e_D, and e_V = e_D rotated by +pi/2.
struct LocalFrame
{
    Point2 e_D{1.0, 0.0};
    Point2 e_V{0.0, 1.0};
    double theta = 0.0;

    static LocalFrame from_angle(double theta);
    /// Frame whose e_D is the normalised direction d.
    static LocalFrame from_direction(Point2 d);
};

/// Absolute area threshold relative to a length scale (bounding-box diagonal).
inline double area_eps(double scale) { return 1e-14 * scale * scale; }

/// Circumcenter of a non-degenerate triangle. Throws DegenerateTriangle.
Point2 circumcenter(Point2 a, Point2 b, Point2 c);

/// Interior angles in degrees at a, b, c. Throws DegenerateTriangle.
std::array<double, 3> triangle_angles(Point2 a, Point2 b, Point2 c);

/// Shoelace area of a simple counterclockwise polygon.
/// Throws TooFewVertices for fewer than 3 vertices and NegativeArea on
/// clockwise input.
double polygon_area(std::span<const Point2> vertices);

/// Signed shoelace area, no checks.
double signed_area(std::span<const Point2> vertices);

/// Local tensor Q K Q^T where Q = [[c, s], [-s, c]] is the clockwise rotation
/// by theta. The result holds (k_DD, k_DV, k_VD, k_VV) for a frame whose e_D
/// makes angle theta with the x1-axis.
Tensor2 rotate_tensor(const Tensor2& K, double theta);

/// Intersection of two orthogonal segments p1p2 and q1q2 (diagonals of an
/// orthodiagonal cell). Throws NonOrthogonal when |cos| exceeds orth_tol and
/// NonIntersecting when the carrier lines meet outside either segment.
Point2 diagonal_intersection(Point2 p1, Point2 p2, Point2 q1, Point2 q2, double orth_tol = 1e-8);

/// Intersection of the two carrier lines, no segment or orthogonality test.
Point2 line_intersection(Point2 p1, Point2 p2, Point2 q1, Point2 q2);

/// Clip a polygon against a convex counterclockwise clip polygon
/// (Sutherland-Hodgman). Output is counterclockwise, possibly empty.
std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> clip);

/// Area-weighted centroid of a counterclockwise polygon.
Point2 polygon_centroid(std::span<const Point2> vertices);

/// Convex hull, counterclockwise, starting from the lowest-leftmost point.
/// Points within rel_tol of a hull edge (relative to the bounding-box
/// diagonal) are dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points, double rel_tol = 1e-10);

/// Distance from p to segment ab.
double segment_distance(Point2 p, Point2 a, Point2 b);

/// Diagonal of the axis-aligned bounding box.
double bbox_diagonal(std::span<const Point2> points);

} // namespace mvd

#endif

#include "hardylab/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardylab {

namespace {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool inside_box(Point p, const Box& b) {
  return p.x >= b.lo.x && p.x <= b.hi.x && p.y >= b.lo.y && p.y <= b.hi.y;
}

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

}  // namespace

double point_box_distance(Point p, const Box& b) {
  const double dx = std::max({b.lo.x - p.x, 0.0, p.x - b.hi.x});
  const double dy = std::max({b.lo.y - p.y, 0.0, p.y - b.hi.y});
  return std::hypot(dx, dy);
}

double point_segment_distance(Point p, const Segment& s) {
  const double vx = s.b.x - s.a.x;
  const double vy = s.b.y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * vx), p.y - (s.a.y + t * vy));
}

double segment_box_distance(const Segment& s, const Box& box) {
  if (inside_box(s.a, box) || inside_box(s.b, box)) return 0.0;
  const Point c[4] = {box.lo, {box.hi.x, box.lo.y}, box.hi, {box.lo.x, box.hi.y}};
  for (int e = 0; e < 4; ++e)
    if (segments_intersect(s.a, s.b, c[e], c[(e + 1) % 4])) return 0.0;
  // Disjoint convex sets: the minimum is attained at a box corner or a segment endpoint.
  double d = std::min(point_box_distance(s.a, box), point_box_distance(s.b, box));
  for (const Point& q : c) d = std::min(d, point_segment_distance(q, s));
  return d;
}

double min_distance(Point p, std::span<const Segment> segments) {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) d = std::min(d, point_segment_distance(p, s));
  return d;
}

double min_distance(const Box& box, std::span<const Segment> segments) {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) {
    d = std::min(d, segment_box_distance(s, box));
    if (d == 0.0) break;
  }
  return d;
}

bool point_in_loop(Point p, std::span<const Point> loop) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = loop[i];
    const Point& b = loop[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double signed_area(std::span<const Point> loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = loop[i];
    const Point& q = loop[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

std::vector<Segment> loop_segments(std::span<const Point> loop) {
  std::vector<Segment> out;
  out.reserve(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) out.push_back({loop[i], loop[(i + 1) % loop.size()]});
  return out;
}

}  // namespace hardylab

#pragma once

#include <span>
#include <vector>

namespace hardylab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Closed segment [a,b]; a == b encodes an isolated boundary point.
struct Segment {
  Point a;
  Point b;
};

/// Closed axis-aligned box [lo.x, hi.x] x [lo.y, hi.y]; degenerate extents allowed.
struct Box {
  Point lo;
  Point hi;
};

double point_segment_distance(Point p, const Segment& s);
double point_box_distance(Point p, const Box& b);

/// Exact Euclidean distance between a segment and a closed box (0 if they meet).
double segment_box_distance(const Segment& s, const Box& box);

double min_distance(Point p, std::span<const Segment> segments);
double min_distance(const Box& box, std::span<const Segment> segments);

/// Crossing-number test against a closed loop of vertices (implicitly closed).
bool point_in_loop(Point p, std::span<const Point> loop);

/// Signed shoelace area of a closed loop (positive for counter-clockwise order).
double signed_area(std::span<const Point> loop);

std::vector<Segment> loop_segments(std::span<const Point> loop);

}  // namespace hardylab

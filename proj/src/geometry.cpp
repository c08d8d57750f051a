#include "bad3/geometry.hpp"

namespace bad3 {

namespace {

void check_dim(size_t a, size_t b, const char* what) {
  if (a != b) throw std::domain_error(std::string(what) + ": dimension mismatch");
}

}  // namespace

Hyperplane make_hyperplane(std::vector<Rational> normal, Rational offset) {
  size_t pivot = normal.size();
  for (size_t i = 0; i < normal.size(); ++i) {
    if (sgn(normal[i]) != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot == normal.size()) throw std::domain_error("make_hyperplane: zero normal");
  Rational scale = normal[pivot];
  for (auto& c : normal) c /= scale;
  offset /= scale;
  return Hyperplane{std::move(normal), std::move(offset)};
}

Rational dot(const Point& a, const Point& b) {
  check_dim(a.size(), b.size(), "dot");
  Rational s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational norm_sq(const Point& a) { return dot(a, a); }

Point sub(const Point& a, const Point& b) {
  check_dim(a.size(), b.size(), "sub");
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool ball_contains_ball(const Ball& outer, const Ball& inner) {
  check_dim(outer.center.size(), inner.center.size(), "ball_contains_ball");
  Rational slack = outer.radius - inner.radius;
  if (sgn(slack) < 0) return false;
  return norm_sq(sub(outer.center, inner.center)) <= slack * slack;
}

Ord cmp_plane_distance(const Point& x, const Hyperplane& plane, const Rational& t) {
  check_dim(x.size(), plane.normal.size(), "cmp_plane_distance");
  Rational num = dot(x, plane.normal) + plane.offset;
  if (sgn(t) < 0) return Ord::GT;  // distances are nonnegative
  return ord_of_int(cmp(Rational(num * num), Rational(t * t * norm_sq(plane.normal))));
}

bool ball_avoids_slab(const Ball& b, const Slab& s) {
  // dist(center, plane) >= width + radius  <=>  clearance >= width everywhere.
  return is_ge(cmp_plane_distance(b.center, s.plane, Rational(s.width + b.radius)));
}

bool point_in_slab(const Point& x, const Slab& s) {
  return cmp_plane_distance(x, s.plane, s.width) == Ord::LT;
}

bool point_in_ball(const Point& x, const Ball& b) {
  check_dim(x.size(), b.center.size(), "point_in_ball");
  return norm_sq(sub(x, b.center)) <= b.radius * b.radius;
}

}  // namespace bad3

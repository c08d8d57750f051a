#pragma once

// Closed Euclidean balls, affine hyperplanes and slab neighborhoods in R^d
// with exact containment / avoidance predicates (all distance comparisons
// squared, never rooted).
//
// Conventions: slab membership is strict (dist < width), avoidance is weak
// (clearance >= width); ties go to "avoids".

#include <vector>

#include "bad3/numerics.hpp"

namespace bad3 {

using Point = std::vector<Rational>;

struct Ball {
  Point center;
  Rational radius;  // > 0

  Rational z() const { return center.at(2); }  // z_B, third coordinate
  bool operator==(const Ball& o) const { return center == o.center && radius == o.radius; }
};

// {x : normal . x + offset = 0}, stored with the first nonzero normal
// entry scaled to 1 so plane equality is structural.
struct Hyperplane {
  std::vector<Rational> normal;
  Rational offset;

  bool operator==(const Hyperplane& o) const { return normal == o.normal && offset == o.offset; }
};

Hyperplane make_hyperplane(std::vector<Rational> normal, Rational offset);

// L^(width) = {x : dist(x, plane) < width}.
struct Slab {
  Hyperplane plane;
  Rational width;  // >= 0
};

Rational dot(const Point& a, const Point& b);
Rational norm_sq(const Point& a);
Point sub(const Point& a, const Point& b);

// dist(centers) + inner.radius <= outer.radius, decided by squaring.
bool ball_contains_ball(const Ball& outer, const Ball& inner);

// Every point of b at distance >= s.width from s.plane.
bool ball_avoids_slab(const Ball& b, const Slab& s);

// dist(x, s.plane) < s.width (strict).
bool point_in_slab(const Point& x, const Slab& s);

bool point_in_ball(const Point& x, const Ball& b);

// Signed-distance numerator |normal.x + offset| compared against
// t * ||normal||: returns ordering of dist(x, plane) vs t (exact).
Ord cmp_plane_distance(const Point& x, const Hyperplane& plane, const Rational& t);

}  // namespace bad3

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kfreelat/types.hpp"

namespace kfreelat {

// Full-rank unimodular lattice in R^n. Columns of basis are the basis
// vectors; points elsewhere in the library are integer coordinate vectors in
// this basis, and all geometry goes through the Gram matrix.
struct Lattice {
  int n = 0;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd gram;
  double min_norm = 0.0;

  // Z^n with the identity basis.
  static Lattice hypercubic(int n);

  // General basis; |det| must equal 1 within 1e-9. The shortest nonzero
  // vector length is searched for n <= 4; beyond that it must be supplied.
  static Lattice from_basis(const Eigen::MatrixXd& basis,
                            std::optional<double> min_norm = std::nullopt);

  Eigen::VectorXd embed(const Point& u) const;
  double norm2(const Point& u) const;

  bool is_hypercubic() const;
};

// Dual lattice, basis the inverse transpose. Unimodularity is preserved.
Lattice dual_lattice(const Lattice& lat);

enum class BallKind { open, closed };

// Geometry of one ball enumeration: a per-coordinate bounding box plus the
// exact quadratic-form membership test. Slabs are the values of the leading
// coordinate, which is what the parallel driver distributes.
class BallScan {
 public:
  BallScan(const Lattice& lat, double radius, const Eigen::VectorXd& center,
           BallKind kind);

  std::size_t slab_count() const {
    return first_hi_ < first_lo_
               ? 0
               : static_cast<std::size_t>(first_hi_ - first_lo_ + 1);
  }
  Coord slab_coord(std::size_t slab) const {
    return first_lo_ + static_cast<Coord>(slab);
  }

  // Visits every lattice point of the ball with leading coordinate
  // slab_coord(slab), in lexicographic order of the remaining coordinates.
  template <class Visit>
  void scan_slab(std::size_t slab, Visit&& visit) const {
    Point u(static_cast<std::size_t>(n_));
    u[0] = slab_coord(slab);
    descend(u, 1, visit);
  }

  bool contains(const Point& u) const;

 private:
  template <class Visit>
  void descend(Point& u, int axis, Visit&& visit) const {
    if (axis == n_) {
      if (contains(u)) visit(const_cast<const Point&>(u));
      return;
    }
    for (Coord x = lo_[static_cast<std::size_t>(axis)];
         x <= hi_[static_cast<std::size_t>(axis)]; ++x) {
      u[static_cast<std::size_t>(axis)] = x;
      descend(u, axis + 1, visit);
    }
  }

  int n_;
  double radius2_;
  BallKind kind_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd center_coords_;  // coordinates of the center in the basis
  std::vector<Coord> lo_, hi_;     // bounding box, coordinates 0..n-1
  Coord first_lo_ = 0, first_hi_ = -1;
};

// All lattice points u with |basis*u - center| < radius (open) or <= radius
// (closed), in lexicographic order. Deterministic for any thread count.
std::vector<Point> points_in_ball(const Lattice& lat, double radius,
                                  const Eigen::VectorXd& center, BallKind kind,
                                  int threads = 0);

// Convenience: ball around the origin.
std::vector<Point> points_in_ball(const Lattice& lat, double radius,
                                  BallKind kind, int threads = 0);

// Componentwise residue in [0, m)^n.
Point reduce_mod(const Point& u, std::int64_t m);
BigPoint reduce_mod(const BigPoint& u, const BigInt& m);

// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  bool operator<(const Rational& o) const;
  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  std::string str() const;
};

// Least m >= 1 with m * y integral in every coordinate; 1 for the origin.
std::int64_t denominator(const std::vector<Rational>& coords);

// Point of the dual lattice's rational span, held in dual-basis coordinates.
struct DualPoint {
  std::vector<Rational> coords;
  std::int64_t den = 1;

  DualPoint() = default;
  explicit DualPoint(std::vector<Rational> c);
};

}  // namespace kfreelat

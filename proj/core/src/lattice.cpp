#include "kfreelat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kfreelat/parallel.hpp"

namespace kfreelat {

Lattice Lattice::hypercubic(int n) {
  if (n < 1)
    throw std::invalid_argument("Lattice: dimension must be >= 1, got " +
                                std::to_string(n));
  Lattice lat;
  lat.n = n;
  lat.basis = Eigen::MatrixXd::Identity(n, n);
  lat.gram = lat.basis;
  lat.min_norm = 1.0;
  return lat;
}

namespace {

// Shortest nonzero vector by exhausting a box that provably contains one.
double shortest_vector_length(const Eigen::MatrixXd& basis) {
  int n = static_cast<int>(basis.cols());
  Eigen::MatrixXd inv = basis.inverse();
  double shortest_column = basis.colwise().norm().minCoeff();
  std::vector<Coord> bound(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // |u_i| = |row_i(B^-1) . Bu| <= |row_i(B^-1)| L for |Bu| <= L.
    double b = inv.row(i).norm() * shortest_column;
    bound[static_cast<std::size_t>(i)] =
        static_cast<Coord>(std::floor(b + 1e-9));
  }
  Eigen::MatrixXd gram = basis.transpose() * basis;
  double best2 = shortest_column * shortest_column;
  Eigen::VectorXd u(n);
  std::vector<Coord> idx(static_cast<std::size_t>(n));
  // Odometer over the box.
  for (int i = 0; i < n; ++i)
    idx[static_cast<std::size_t>(i)] = -bound[static_cast<std::size_t>(i)];
  for (;;) {
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      u[i] = static_cast<double>(idx[static_cast<std::size_t>(i)]);
      if (idx[static_cast<std::size_t>(i)] != 0) zero = false;
    }
    if (!zero) {
      double q = u.dot(gram * u);
      if (q < best2) best2 = q;
    }
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[static_cast<std::size_t>(axis)] <=
          bound[static_cast<std::size_t>(axis)])
        break;
      idx[static_cast<std::size_t>(axis)] = -bound[static_cast<std::size_t>(axis)];
      --axis;
    }
    if (axis < 0) break;
  }
  return std::sqrt(best2);
}

}  // namespace

Lattice Lattice::from_basis(const Eigen::MatrixXd& basis,
                            std::optional<double> min_norm) {
  if (basis.rows() != basis.cols() || basis.rows() < 1)
    throw std::invalid_argument("Lattice: basis must be square and nonempty");
  double det = basis.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "Lattice: basis must be unimodular, |det| = " +
        std::to_string(std::abs(det)));
  Lattice lat;
  lat.n = static_cast<int>(basis.cols());
  lat.basis = basis;
  lat.gram = basis.transpose() * basis;
  if (min_norm) {
    if (*min_norm <= 0.0)
      throw std::invalid_argument("Lattice: min_norm must be positive");
    lat.min_norm = *min_norm;
  } else {
    if (lat.n > 4)
      throw std::invalid_argument(
          "Lattice: shortest-vector search is provided for n <= 4; pass "
          "min_norm explicitly for higher dimensions");
    lat.min_norm = shortest_vector_length(basis);
  }
  return lat;
}

Eigen::VectorXd Lattice::embed(const Point& u) const {
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("Lattice: point dimension mismatch");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = static_cast<double>(u[static_cast<std::size_t>(i)]);
  return basis * v;
}

double Lattice::norm2(const Point& u) const {
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("Lattice: point dimension mismatch");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = static_cast<double>(u[static_cast<std::size_t>(i)]);
  return v.dot(gram * v);
}

bool Lattice::is_hypercubic() const {
  return basis.isIdentity(1e-12);
}

Lattice dual_lattice(const Lattice& lat) {
  Eigen::MatrixXd dual_basis = lat.basis.inverse().transpose();
  return Lattice::from_basis(dual_basis);
}

BallScan::BallScan(const Lattice& lat, double radius,
                   const Eigen::VectorXd& center, BallKind kind)
    : n_(lat.n), radius2_(radius * radius), kind_(kind), gram_(lat.gram) {
  if (radius < 0.0)
    throw std::invalid_argument("BallScan: radius must be >= 0");
  if (center.size() != lat.n)
    throw std::invalid_argument("BallScan: center dimension mismatch");
  Eigen::MatrixXd inv = lat.basis.inverse();
  center_coords_ = inv * center;
  lo_.resize(static_cast<std::size_t>(n_));
  hi_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    // Membership |Bu - c| <= r forces u_i within r |row_i(B^-1)| of the
    // center's i-th coordinate. The 1e-9 guard absorbs roundoff on closed
    // balls whose radius lands exactly on a lattice point.
    double reach = inv.row(i).norm() * radius;
    double c = center_coords_[i];
    lo_[static_cast<std::size_t>(i)] =
        static_cast<Coord>(std::ceil(c - reach - 1e-9));
    hi_[static_cast<std::size_t>(i)] =
        static_cast<Coord>(std::floor(c + reach + 1e-9));
  }
  first_lo_ = lo_[0];
  first_hi_ = hi_[0];
}

bool BallScan::contains(const Point& u) const {
  double q = 0.0;
  // (u - c)^T G (u - c) with c in basis coordinates.
  for (int i = 0; i < n_; ++i) {
    double di = static_cast<double>(u[static_cast<std::size_t>(i)]) -
                center_coords_[i];
    double row = 0.0;
    for (int j = 0; j < n_; ++j) {
      double dj = static_cast<double>(u[static_cast<std::size_t>(j)]) -
                  center_coords_[j];
      row += gram_(i, j) * dj;
    }
    q += di * row;
  }
  if (kind_ == BallKind::open) return q < radius2_ - 1e-9;
  return q <= radius2_ + 1e-9;
}

std::vector<Point> points_in_ball(const Lattice& lat, double radius,
                                  const Eigen::VectorXd& center, BallKind kind,
                                  int threads) {
  BallScan scan(lat, radius, center, kind);
  std::vector<std::vector<Point>> slabs(scan.slab_count());
  parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
    scan.scan_slab(s, [&](const Point& u) { slabs[s].push_back(u); });
  });
  std::vector<Point> out;
  std::size_t total = 0;
  for (const auto& s : slabs) total += s.size();
  out.reserve(total);
  for (auto& s : slabs)
    out.insert(out.end(), std::make_move_iterator(s.begin()),
               std::make_move_iterator(s.end()));
  return out;
}

std::vector<Point> points_in_ball(const Lattice& lat, double radius,
                                  BallKind kind, int threads) {
  return points_in_ball(lat, radius, Eigen::VectorXd::Zero(lat.n), kind,
                        threads);
}

Point reduce_mod(const Point& u, std::int64_t m) {
  if (m < 1)
    throw std::invalid_argument("reduce_mod: modulus must be >= 1, got " +
                                std::to_string(m));
  Point out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = ((u[i] % m) + m) % m;
  return out;
}

BigPoint reduce_mod(const BigPoint& u, const BigInt& m) {
  if (m < 1)
    throw std::invalid_argument("reduce_mod: modulus must be >= 1");
  BigPoint out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = ((u[i] % m) + m) % m;
  return out;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

bool Rational::operator<(const Rational& o) const {
  // Cross multiply; desk-scale values keep this well inside int64.
  return num * o.den < o.num * den;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::int64_t denominator(const std::vector<Rational>& coords) {
  std::int64_t l = 1;
  for (const Rational& c : coords) l = std::lcm(l, c.den);
  return l;
}

DualPoint::DualPoint(std::vector<Rational> c) : coords(std::move(c)) {
  den = denominator(coords);
}

}  // namespace kfreelat

#include "kfreelat/kfree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "kfreelat/errors.hpp"
#include "kfreelat/numeric.hpp"
#include "kfreelat/parallel.hpp"

namespace kfreelat {

KFreeParams::KFreeParams(int n_, int k_) : n(n_), k(k_) {
  if (n < 1)
    throw std::invalid_argument("KFreeParams: dimension must be >= 1, got " +
                                std::to_string(n));
  if (k < 1)
    throw std::invalid_argument("KFreeParams: power must be >= 1, got " +
                                std::to_string(k));
  if (n == 1 && k == 1)
    throw std::invalid_argument(
        "KFreeParams: n = k = 1 is excluded, the visible points of the line "
        "are just -1 and +1");
}

namespace {

std::int64_t coordinate_gcd(const Point& t) {
  std::int64_t g = 0;
  for (Coord c : t) g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

}  // namespace

bool is_kfree_point(const Point& t, const KFreeParams& params) {
  if (static_cast<int>(t.size()) != params.n)
    throw std::invalid_argument("is_kfree_point: dimension mismatch");
  std::int64_t g = coordinate_gcd(t);
  if (g == 0) return false;  // zero vector
  if (params.k == 1) return g == 1;
  return is_kfree_integer(g, params.k);
}

bool is_kfree_point(const Point& t, const KFreeParams& params,
                    const KfreeSieve& sieve) {
  if (static_cast<int>(t.size()) != params.n)
    throw std::invalid_argument("is_kfree_point: dimension mismatch");
  if (sieve.k() != params.k)
    throw std::invalid_argument("is_kfree_point: sieve order mismatch");
  std::int64_t g = coordinate_gcd(t);
  if (g == 0) return false;
  if (params.k == 1) return g == 1;
  return sieve(g);
}

namespace {

// Largest coordinate magnitude that can occur in the ball, from the scan's
// bounding box. Bounds the coordinate gcd, so it sizes the sieve.
std::int64_t max_coordinate_bound(const Lattice& lat, double radius) {
  Eigen::MatrixXd inv = lat.basis.inverse();
  double m = 1.0;
  for (int i = 0; i < lat.n; ++i)
    m = std::max(m, std::abs(inv.row(i).norm() * radius) + 1.0);
  return static_cast<std::int64_t>(std::ceil(m));
}

template <class PerPoint>
void scan_members(const KFreeParams& params, const Lattice& lat, double radius,
                  int threads, const PerPoint& per_point) {
  BallScan scan(lat, radius, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  if (params.k == 1) {
    parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
      scan.scan_slab(s, [&](const Point& u) {
        if (coordinate_gcd(u) == 1) per_point(s, u);
      });
    });
    return;
  }
  KfreeSieve sieve(max_coordinate_bound(lat, radius), params.k);
  parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
    scan.scan_slab(s, [&](const Point& u) {
      std::int64_t g = coordinate_gcd(u);
      if (g != 0 && sieve(g)) per_point(s, u);
    });
  });
}

}  // namespace

Configuration generate(const KFreeParams& params, const Lattice& lat,
                       double radius, int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument("generate: lattice dimension mismatch");
  if (radius <= 0.0)
    throw std::invalid_argument("generate: radius must be positive");
  BallScan probe(lat, radius, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  std::vector<std::vector<Point>> slabs(probe.slab_count());
  scan_members(params, lat, radius, threads,
               [&](std::size_t s, const Point& u) { slabs[s].push_back(u); });
  Configuration cfg;
  cfg.window_radius = radius;
  std::size_t total = 0;
  for (const auto& s : slabs) total += s.size();
  cfg.points.reserve(total);
  for (auto& s : slabs)
    cfg.points.insert(cfg.points.end(), std::make_move_iterator(s.begin()),
                      std::make_move_iterator(s.end()));
  return cfg;
}

double density_estimate(const KFreeParams& params, const Lattice& lat,
                        double radius, int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument("density_estimate: lattice dimension mismatch");
  if (radius <= 0.0)
    throw std::invalid_argument("density_estimate: radius must be positive");
  BallScan probe(lat, radius, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  std::vector<std::int64_t> counts(probe.slab_count(), 0);
  scan_members(params, lat, radius, threads,
               [&](std::size_t s, const Point&) { ++counts[s]; });
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  return static_cast<double>(total) /
         (unit_ball_volume(params.n) * std::pow(radius, params.n));
}

CertifiedValue density_exact(const KFreeParams& params) {
  CertifiedValue z = zeta(params.n * params.k);
  CertifiedValue out;
  out.value = 1.0 / z.value;
  out.truncation_error =
      z.truncation_error / ((z.value - z.truncation_error) * z.value) +
      4e-16 * out.value;
  return out;
}

BigInt HoleCertificate::coset_modulus(int k) const {
  BigInt m = 1;
  for (int i = 0; i < k; ++i) m *= prime_product;
  return m;
}

HoleCertificate hole_for_offsets(std::vector<Point> offsets,
                                 const KFreeParams& params, double radius,
                                 std::uint64_t max_bits) {
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  if (offsets.empty())
    throw std::invalid_argument("hole_for_offsets: empty offset set");

  // Bit budget first: the coset modulus is (product of the first m primes)^k.
  std::size_t count = offsets.size();
  std::int64_t sieve_limit = 64;
  std::vector<std::int64_t> primes;
  while (true) {
    primes = sieve_primes(sieve_limit);
    if (primes.size() >= count) break;
    sieve_limit *= 2;
  }
  primes.resize(count);
  double bits = 0.0;
  for (std::int64_t p : primes)
    bits += params.k * std::log2(static_cast<double>(p));
  if (bits > static_cast<double>(max_bits))
    throw ResourceError("hole_for_offsets: coset modulus too large",
                        static_cast<std::uint64_t>(std::ceil(bits)), max_bits);

  HoleCertificate cert;
  cert.radius = radius;
  cert.prime_product = 1;
  std::vector<CrtResidue> residues;
  residues.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t p = primes[i];
    cert.assignments.push_back({offsets[i], p});
    cert.prime_product *= p;
    CrtResidue res;
    res.modulus = 1;
    for (int e = 0; e < params.k; ++e) res.modulus *= p;
    res.target.reserve(offsets[i].size());
    for (Coord c : offsets[i]) res.target.emplace_back(-BigInt(c));
    residues.push_back(std::move(res));
  }
  cert.center = crt_solve(residues);
  return cert;
}

HoleCertificate find_hole(const KFreeParams& params, const Lattice& lat,
                          double radius, std::uint64_t max_bits) {
  if (lat.n != params.n)
    throw std::invalid_argument("find_hole: lattice dimension mismatch");
  if (radius < 0.0)
    throw std::invalid_argument("find_hole: radius must be >= 0");
  std::vector<Point> offsets = points_in_ball(lat, radius, BallKind::closed);
  return hole_for_offsets(std::move(offsets), params, radius, max_bits);
}

bool verify_hole(const HoleCertificate& cert, const KFreeParams& params,
                 const Lattice& lat) {
  if (lat.n != params.n) return false;
  if (cert.center.size() != static_cast<std::size_t>(params.n)) return false;
  if (cert.radius < 0.0) return false;

  // Assigned primes: prime, pairwise distinct, product as claimed.
  BigInt product = 1;
  std::map<Point, std::int64_t> by_offset;
  for (const auto& a : cert.assignments) {
    if (!is_prime(a.prime)) return false;
    if (!by_offset.emplace(a.offset, a.prime).second) return false;
    product *= a.prime;
  }
  {
    std::map<std::int64_t, int> seen;
    for (const auto& a : cert.assignments)
      if (++seen[a.prime] > 1) return false;
  }
  if (product != cert.prime_product) return false;

  // Every offset of the closed ball must be covered and satisfy the
  // congruence center + u = 0 mod p^k, which pins p^k inside the gcd.
  std::vector<Point> offsets = points_in_ball(lat, cert.radius, BallKind::closed);
  bool small_center = true;
  Point small;
  small_center = to_small(cert.center, small);
  if (small_center)
    for (Coord c : small)
      if (c > (std::int64_t(1) << 31) || c < -(std::int64_t(1) << 31))
        small_center = false;

  for (const Point& u : offsets) {
    auto it = by_offset.find(u);
    if (it == by_offset.end()) return false;
    BigInt pk = 1;
    for (int e = 0; e < params.k; ++e) pk *= it->second;
    for (std::size_t d = 0; d < u.size(); ++d) {
      BigInt coord = cert.center[d] + u[d];
      if (coord % pk != 0) return false;
    }
    if (small_center) {
      // Independent route: the literal membership test.
      Point t(u.size());
      for (std::size_t d = 0; d < u.size(); ++d) t[d] = small[d] + u[d];
      if (is_kfree_point(t, params)) return false;
    }
  }
  return true;
}

bool is_admissible(const Configuration& cfg, const KFreeParams& params) {
  std::vector<Point> pts = cfg.points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return true;
  for (const Point& p : pts)
    if (static_cast<int>(p.size()) != params.n)
      throw std::invalid_argument("is_admissible: dimension mismatch");

  // A prime can only fill all p^(nk) classes mod p^k if that many distinct
  // points exist, so primes beyond |cfg|^(1/nk) never saturate.
  double count = static_cast<double>(pts.size());
  std::int64_t pmax = static_cast<std::int64_t>(
      std::floor(std::pow(count, 1.0 / (params.n * params.k)) + 1e-9));
  if (pmax < 2) return true;
  for (std::int64_t p : sieve_primes(pmax)) {
    if (ipow(static_cast<double>(p), params.n * params.k) > count) continue;
    std::int64_t pk = ipow64(p, params.k);
    std::set<Point> classes;
    for (const Point& t : pts) classes.insert(reduce_mod(t, pk));
    if (classes.size() ==
        static_cast<std::size_t>(ipow64(p, params.n * params.k)))
      return false;
  }
  return true;
}

std::optional<Point> smallest_hole_center(const KFreeParams& params,
                                          const Lattice& lat, double radius,
                                          double search_radius) {
  if (lat.n != params.n)
    throw std::invalid_argument("smallest_hole_center: dimension mismatch");
  if (lat.n > 2)
    throw std::invalid_argument(
        "smallest_hole_center: exhaustive search is provided for n <= 2");
  std::vector<Point> centers =
      points_in_ball(lat, search_radius, BallKind::closed);
  std::stable_sort(centers.begin(), centers.end(),
                   [&](const Point& a, const Point& b) {
                     double na = lat.norm2(a), nb = lat.norm2(b);
                     if (na != nb) return na < nb;
                     return a < b;
                   });
  std::vector<Point> offsets = points_in_ball(lat, radius, BallKind::closed);
  for (const Point& c : centers) {
    bool hole = true;
    Point t(c.size());
    for (const Point& u : offsets) {
      for (std::size_t d = 0; d < c.size(); ++d) t[d] = c[d] + u[d];
      if (is_kfree_point(t, params)) {
        hole = false;
        break;
      }
    }
    if (hole) return c;
  }
  return std::nullopt;
}

}  // namespace kfreelat

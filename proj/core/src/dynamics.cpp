#include "kfreelat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "kfreelat/numeric.hpp"
#include "kfreelat/parallel.hpp"
#include "kfreelat/patches.hpp"

namespace kfreelat {

DistanceBound config_distance(const Configuration& x, const Configuration& y,
                              const Lattice& lat) {
  double w = std::min(x.window_radius, y.window_radius);
  std::set<Point> xs(x.points.begin(), x.points.end());
  std::set<Point> ys(y.points.begin(), y.points.end());

  // Smallest norm at which membership differs, inside the common window.
  double first_diff = -1.0;
  auto consider = [&](const Point& p, const std::set<Point>& other) {
    if (other.count(p)) return;
    double norm = std::sqrt(lat.norm2(p));
    if (norm >= w - 1e-12) return;  // outside the comparable region
    if (first_diff < 0.0 || norm < first_diff) first_diff = norm;
  };
  for (const Point& p : xs) consider(p, ys);
  for (const Point& p : ys) consider(p, xs);

  DistanceBound out;
  if (first_diff >= 0.0) {
    out.decided = true;
    out.value = first_diff <= 1.0 ? 1.0 : 1.0 / first_diff;
    return out;
  }
  out.decided = false;
  out.value = (w <= 1.0) ? 1.0 : 1.0 / w;
  return out;
}

ProximalityWitness proximality_witness(const Point& shift, double rho,
                                       const KFreeParams& params,
                                       const Lattice& lat,
                                       std::uint64_t max_bits) {
  if (lat.n != params.n)
    throw std::invalid_argument(
        "proximality_witness: lattice dimension mismatch");
  if (static_cast<int>(shift.size()) != params.n)
    throw std::invalid_argument(
        "proximality_witness: shift dimension mismatch");
  if (std::all_of(shift.begin(), shift.end(),
                  [](Coord c) { return c == 0; }))
    throw std::invalid_argument(
        "proximality_witness: shift must be nonzero, the pair would be a "
        "single orbit point");
  if (rho <= 0.0)
    throw std::invalid_argument(
        "proximality_witness: window radius must be positive");

  // Offsets that must miss the set: the closed window ball around the
  // translate, and the same ball moved by -shift to empty the shifted copy.
  std::vector<Point> ball = points_in_ball(lat, rho, BallKind::closed);
  std::vector<Point> offsets = ball;
  offsets.reserve(2 * ball.size());
  for (const Point& u : ball) {
    Point v(u.size());
    for (std::size_t d = 0; d < u.size(); ++d) v[d] = u[d] - shift[d];
    offsets.push_back(std::move(v));
  }
  ProximalityWitness w;
  w.shift = shift;
  w.rho = rho;
  w.certificate = hole_for_offsets(std::move(offsets), params, rho, max_bits);
  w.translate = w.certificate.center;
  return w;
}

bool verify_witness(const ProximalityWitness& witness,
                    const KFreeParams& params, const Lattice& lat) {
  if (lat.n != params.n) return false;
  if (witness.rho <= 0.0) return false;
  const HoleCertificate& cert = witness.certificate;
  if (witness.translate != cert.center) return false;
  if (cert.center.size() != static_cast<std::size_t>(params.n)) return false;

  BigInt product = 1;
  std::map<Point, std::int64_t> by_offset;
  std::set<std::int64_t> primes;
  for (const auto& a : cert.assignments) {
    if (!is_prime(a.prime)) return false;
    if (!primes.insert(a.prime).second) return false;
    if (!by_offset.emplace(a.offset, a.prime).second) return false;
    product *= a.prime;
  }
  if (product != cert.prime_product) return false;

  Point small;
  bool small_center = to_small(cert.center, small);
  if (small_center)
    for (Coord c : small)
      if (c > (std::int64_t(1) << 31) || c < -(std::int64_t(1) << 31))
        small_center = false;

  auto excised = [&](const Point& u) {
    auto it = by_offset.find(u);
    if (it == by_offset.end()) return false;
    BigInt pk = 1;
    for (int e = 0; e < params.k; ++e) pk *= it->second;
    for (std::size_t d = 0; d < u.size(); ++d)
      if ((cert.center[d] + u[d]) % pk != 0) return false;
    if (small_center) {
      Point t(u.size());
      for (std::size_t d = 0; d < u.size(); ++d) t[d] = small[d] + u[d];
      if (is_kfree_point(t, params)) return false;
    }
    return true;
  };

  for (const Point& u : points_in_ball(lat, witness.rho, BallKind::closed)) {
    if (!excised(u)) return false;
    Point v(u.size());
    for (std::size_t d = 0; d < u.size(); ++d) v[d] = u[d] - witness.shift[d];
    if (!excised(v)) return false;
  }
  return true;
}

namespace {

// Density of translates t in the open scan ball whose patch at t - base
// matches the target, per unit volume.
double cylinder_visit_density(const Configuration& target, const Point& base,
                              const KFreeParams& params, const Lattice& lat,
                              double scan_radius, int threads) {
  double rho = target.window_radius;
  std::vector<Point> window = points_in_ball(lat, rho, BallKind::open);
  std::map<Point, std::size_t> index;
  for (std::size_t i = 0; i < window.size(); ++i) index.emplace(window[i], i);
  if (window.size() > 63)
    throw std::invalid_argument(
        "cylinder density: window exceeds the bitmask budget");
  std::uint64_t target_mask = 0;
  for (const Point& p : target.points) {
    auto it = index.find(p);
    if (it == index.end())
      throw std::invalid_argument(
          "cylinder density: patch point outside its window ball");
    target_mask |= std::uint64_t(1) << it->second;
  }

  BallScan scan(lat, scan_radius, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  Eigen::MatrixXd inv = lat.basis.inverse();
  double coord_reach = 0.0;
  for (int i = 0; i < lat.n; ++i)
    coord_reach = std::max(coord_reach, inv.row(i).norm());
  std::int64_t base_mag = 0;
  for (Coord c : base) base_mag = std::max<std::int64_t>(base_mag, c < 0 ? -c : c);
  std::int64_t gcd_bound = static_cast<std::int64_t>(
      std::ceil(coord_reach * (scan_radius + rho) + 2.0)) + base_mag;
  std::unique_ptr<KfreeSieve> sieve;
  if (params.k >= 2)
    sieve = std::make_unique<KfreeSieve>(gcd_bound, params.k);

  std::vector<std::int64_t> counts(scan.slab_count(), 0);
  parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
    scan.scan_slab(s, [&](const Point& t) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < window.size(); ++i) {
        std::int64_t g = 0;
        for (std::size_t d = 0; d < t.size(); ++d) {
          std::int64_t c = t[d] - base[d] + window[i][d];
          g = std::gcd(g, c < 0 ? -c : c);
        }
        bool member = g != 0 && (params.k == 1 ? g == 1 : (*sieve)(g));
        if (member) mask |= std::uint64_t(1) << i;
      }
      if (mask == target_mask) ++counts[s];
    });
  });
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  return static_cast<double>(total) /
         (unit_ball_volume(params.n) * std::pow(scan_radius, params.n));
}

std::optional<Point> first_occurrence(const Configuration& patch,
                                      const KFreeParams& params,
                                      const Lattice& lat, double scan_radius) {
  std::string key = canonical_patch_key(patch);
  BallScan scan(lat, scan_radius, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  for (std::size_t s = 0; s < scan.slab_count(); ++s) {
    std::optional<Point> found;
    scan.scan_slab(s, [&](const Point& t) {
      if (found) return;
      Configuration pt = patch_at(params, lat, t, patch.window_radius);
      if (canonical_patch_key(pt) == key) found = t;
    });
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

double ergodicity_evidence(const Configuration& patch_p,
                           const Configuration& patch_q,
                           const KFreeParams& params, const Lattice& lat,
                           double scan_radius, int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument(
        "ergodicity_evidence: lattice dimension mismatch");
  std::optional<Point> start =
      first_occurrence(patch_p, params, lat, scan_radius);
  if (!start)
    throw std::invalid_argument(
        "ergodicity_evidence: the first patch does not occur within the scan "
        "radius");
  return cylinder_visit_density(patch_q, *start, params, lat, scan_radius,
                                threads);
}

GenericityReport genericity_check(const Configuration& patch,
                                  const KFreeParams& params,
                                  const Lattice& lat, double scan_radius,
                                  int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument("genericity_check: lattice dimension mismatch");
  GenericityReport report;
  Point origin(static_cast<std::size_t>(params.n), 0);
  report.orbit_average = cylinder_visit_density(patch, origin, params, lat,
                                                scan_radius, threads);
  report.frequency = frequency_exact(patch, params, lat).value;
  report.gap = std::abs(report.orbit_average - report.frequency);
  return report;
}

}  // namespace kfreelat

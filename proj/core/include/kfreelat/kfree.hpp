#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kfreelat/arithmetic.hpp"
#include "kfreelat/lattice.hpp"
#include "kfreelat/types.hpp"

namespace kfreelat {

// Parameters of the point set: dimension n and power k. A nonzero lattice
// point belongs to the set when the gcd of its coordinates is k-free, i.e.
// divisible by no k-th prime power. k = 1 is the visible points. The pair
// n = k = 1 is rejected: on the line that set is just {-1, +1}.
struct KFreeParams {
  int n = 0;
  int k = 0;

  KFreeParams(int n, int k);
};

// Finite point cloud cut out by a centered window.
struct Configuration {
  std::vector<Point> points;
  double window_radius = 0.0;
};

// Membership test. The zero vector is never a member.
bool is_kfree_point(const Point& t, const KFreeParams& params);

// Bulk variant; the sieve must cover every coordinate magnitude that occurs.
bool is_kfree_point(const Point& t, const KFreeParams& params,
                    const KfreeSieve& sieve);

// All member points in the open ball of the given radius around the origin,
// lexicographic order. window_radius of the result is the radius.
Configuration generate(const KFreeParams& params, const Lattice& lat,
                       double radius, int threads = 0);

// Point count in the open ball divided by the ball volume.
double density_estimate(const KFreeParams& params, const Lattice& lat,
                        double radius, int threads = 0);

// Density of the full set: 1/zeta(nk), certified.
CertifiedValue density_exact(const KFreeParams& params);

constexpr std::uint64_t kDefaultBitBudget = 1u << 20;

// Certificate that the closed ball of the stated radius around center avoids
// the point set. Each window offset u carries a prime p with
// center + u = 0 mod p^k componentwise, which forces p^k to divide the
// coordinate gcd. Primes are pairwise distinct, assigned to offsets in
// lexicographic order, smallest primes first.
struct HoleCertificate {
  struct Assignment {
    Point offset;
    std::int64_t prime = 0;
  };

  BigPoint center;
  double radius = 0.0;
  std::vector<Assignment> assignments;
  BigInt prime_product;  // product of the assigned primes

  BigInt coset_modulus(int k) const;  // prime_product^k
};

// Builds a hole certificate by simultaneous congruences over the offsets of
// the closed ball. Throws ResourceError when the coset modulus would exceed
// max_bits bits.
HoleCertificate find_hole(const KFreeParams& params, const Lattice& lat,
                          double radius,
                          std::uint64_t max_bits = kDefaultBitBudget);

// Same construction over an arbitrary offset set (deduplicated, sorted).
// Shared with the proximality machinery.
HoleCertificate hole_for_offsets(std::vector<Point> offsets,
                                 const KFreeParams& params, double radius,
                                 std::uint64_t max_bits = kDefaultBitBudget);

// Re-derives the offsets of the closed ball, checks coverage, distinctness
// and primality of the assigned primes, the product, and the congruence at
// every offset. When the center is small enough for direct arithmetic the
// points are additionally tested literally.
bool verify_hole(const HoleCertificate& cert, const KFreeParams& params,
                 const Lattice& lat);

// A configuration is admissible when it misses at least one residue class
// mod p^k for every prime p. Only primes with p^(nk) <= point count can be
// saturated, so the check is finite and exact.
bool is_admissible(const Configuration& cfg, const KFreeParams& params);

// Exhaustive minimal-norm hole center: smallest-norm lattice point (ties by
// lexicographic order) whose closed radius-r ball avoids the set. Scans
// centers of norm <= search_radius; desk scale, intended for n <= 2.
std::optional<Point> smallest_hole_center(const KFreeParams& params,
                                          const Lattice& lat, double radius,
                                          double search_radius);

}  // namespace kfreelat

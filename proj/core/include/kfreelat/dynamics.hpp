#pragma once

#include <cstdint>
#include <vector>

#include "kfreelat/kfree.hpp"
#include "kfreelat/lattice.hpp"

namespace kfreelat {

// Hull metric between two configurations: d = min(1, 1/r) where r is the
// largest radius on which the point sets agree. Finite windows can only
// certify agreement up to the smaller window radius, so the bound is flagged:
// decided means a genuine disagreement was found inside both windows and the
// value is exact; otherwise the value is only an upper bound.
struct DistanceBound {
  double value = 1.0;
  bool decided = false;
};

DistanceBound config_distance(const Configuration& x, const Configuration& y,
                              const Lattice& lat);

// Witness that the set and its shift by a nonzero lattice vector are a
// proximal pair: a translate around which both have empty windows of radius
// rho. Built from one hole certificate whose offsets cover the window ball
// and the window ball moved by -shift, so the certificate's congruences
// excise both sets at once.
struct ProximalityWitness {
  Point shift;
  double rho = 0.0;
  BigPoint translate;  // equals the certificate center
  HoleCertificate certificate;
};

ProximalityWitness proximality_witness(
    const Point& shift, double rho, const KFreeParams& params,
    const Lattice& lat, std::uint64_t max_bits = kDefaultBitBudget);

// Independent re-check: coverage of both offset sets, primality and
// distinctness of the assigned primes, every congruence, and the literal
// membership test whenever the center fits machine integers.
bool verify_witness(const ProximalityWitness& witness,
                    const KFreeParams& params, const Lattice& lat);

// Frequency with which the orbit, started at the first occurrence of
// patch_p, visits the cylinder of patch_q: the density of translates t in
// the scan ball whose patch at t - s equals patch_q, where s is the first
// translate showing patch_p. Under unique ergodicity this converges to the
// exact frequency of patch_q for every starting patch.
double ergodicity_evidence(const Configuration& patch_p,
                           const Configuration& patch_q,
                           const KFreeParams& params, const Lattice& lat,
                           double scan_radius, int threads = 0);

// Orbit average of the cylinder indicator of a patch against its exact
// frequency; gap is the absolute difference.
struct GenericityReport {
  double orbit_average = 0.0;
  double frequency = 0.0;
  double gap = 0.0;
};

GenericityReport genericity_check(const Configuration& patch,
                                  const KFreeParams& params,
                                  const Lattice& lat, double scan_radius,
                                  int threads = 0);

}  // namespace kfreelat

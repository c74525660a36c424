#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kfreelat/kfree.hpp"
#include "kfreelat/lattice.hpp"

namespace kfreelat {

// The patch of the set at translate t with window radius rho: all window
// offsets u (|u| < rho) with t + u in the set, as a configuration with
// window_radius rho.
Configuration patch_at(const KFreeParams& params, const Lattice& lat,
                       const Point& t, double rho);

// Canonical text key of a point set: sorted coordinate tuples, e.g.
// "{(-1,0),(0,1)}"; the empty set is "{}".
std::string canonical_patch_key(const std::vector<Point>& points);
std::string canonical_patch_key(const Configuration& cfg);

// Exhaustive patch statistics over all translates t in the open scan ball.
// Patches are keyed by subsets of the window B_rho(0), held as bitmasks over
// the lexicographically sorted window during the scan.
struct PatchCensus {
  struct Entry {
    std::int64_t count = 0;
    Point first_translate;    // first in scan order (leading slab, then lex)
    std::uint64_t mask = 0;   // bit i set when window[i] is in the patch
  };

  double rho = 0.0;
  double scan_radius = 0.0;
  std::vector<Point> window;  // B_rho(0) lattice points, lex order
  std::map<std::string, Entry> patches;
  std::int64_t translate_count = 0;

  std::size_t distinct() const { return patches.size(); }
};

// Window sizes are capped at 63 so a patch fits one machine word during the
// scan. Larger windows raise ResourceError.
PatchCensus census(const KFreeParams& params, const Lattice& lat, double rho,
                   double scan_radius, int threads = 0);

// Occurrences of the patch per unit volume of the scan ball. The patch's
// window radius must match the census.
double frequency_empirical(const PatchCensus& census, const Configuration& patch);

struct FrequencyResult {
  double value = 0.0;
  double truncation_error = 0.0;
  std::int64_t prime_cutoff = 0;   // primes up to here entered exactly
  std::int64_t term_count = 0;     // inclusion-exclusion terms evaluated
};

// Exact frequency of a patch as an absolutely convergent inclusion-exclusion
// over subsets F of the window complement:
//
//   nu(P) = sum_F (-1)^|F| prod_p (1 - c_p(P union F) / p^(nk))
//
// where c_p counts occupied classes mod p^k. Small primes contribute their
// exact class counts; mid-range primes contribute (1 - m/p^(nk)) with
// m = |P union F|; the remaining tail is bracketed through the prime zeta
// function, and the reported truncation_error certifies the bracket. The
// prime cutoff escalates until the certified error meets tolerance.
FrequencyResult frequency_exact(const Configuration& patch,
                                const KFreeParams& params, const Lattice& lat,
                                double tolerance = 1e-9);

// One row per patch of the census, exact and empirical side by side.
struct FrequencyRow {
  std::string patch;
  double empirical = 0.0;
  double exact = 0.0;
  double truncation_error = 0.0;
};

std::vector<FrequencyRow> frequency_table(const PatchCensus& census,
                                          const KFreeParams& params,
                                          const Lattice& lat,
                                          double tolerance = 1e-9);

// Sum of exact frequencies over every subset of the window B_rho(0); the
// patches of the set tile the space of configurations, so the total is 1.
struct ConsistencyReport {
  double total = 0.0;
  double truncation_error = 0.0;
  std::int64_t patch_count = 0;
};

ConsistencyReport measure_consistency(const KFreeParams& params,
                                      const Lattice& lat, double rho,
                                      double tolerance = 1e-9);

// Patch-counting entropy data. empirical is log2 N(rho) / volume(B_rho) from
// a census when the window fits the bitmask budget (NaN otherwise);
// interpolation_lower is the log2-size of the admissible subsets of the
// window bounded below through the point count of the set itself, i.e.
// dens(V) * volume, which is the exponential growth rate; limit is the
// closed-form dens(V) = 1/zeta(nk).
struct EntropyReport {
  double empirical = 0.0;
  double interpolation_lower = 0.0;
  double limit = 0.0;
  std::int64_t distinct_patches = 0;
};

EntropyReport entropy_estimate(const KFreeParams& params, const Lattice& lat,
                               double rho, double scan_radius,
                               int threads = 0);

}  // namespace kfreelat

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kfreelat/kfree.hpp"
#include "kfreelat/lattice.hpp"

namespace kfreelat {

// The diffraction measure of the set is pure point, supported on the dual
// rationals y whose denominator q = den(y) is (k+1)-free, with intensity
//
//   I(y) = ( dens(V) * prod over p | q of 1 / (p^(nk) - 1) )^2,
//
// a function of q alone.

// True iff q >= 1 and no prime power p^(k+1) divides q.
bool in_spectrum(std::int64_t q, const KFreeParams& params);

// Intensity for denominator q; throws domain_error when q is outside the
// spectrum.
double intensity(std::int64_t q, const KFreeParams& params);

// Rectangular search region in dual-basis coordinates plus a relative
// intensity floor: points with I(y) >= threshold * I(0) are kept.
struct SpectrumWindow {
  std::vector<std::pair<double, double>> box;  // per-axis [lo, hi]
  double threshold = 1e-6;
};

struct SpectrumPoint {
  std::vector<Rational> y;  // dual-basis coordinates, reduced
  std::int64_t q = 1;       // den(y)
  double intensity = 0.0;
};

// All spectrum points in the window. Denominators are enumerated exactly
// from the intensity bound (never scanned in floating point), then each
// numerator box is walked. Sorted by intensity descending, ties by
// lexicographic coordinate order.
std::vector<SpectrumPoint> enumerate_spectrum(const SpectrumWindow& window,
                                              const KFreeParams& params,
                                              const Lattice& lat);

// Finite-volume Fourier amplitude a_R(y): the normalized exponential sum
// over the set's points in the open R-ball. Phases are exact rationals of
// the dot product in the dual pairing, evaluated through a residue table,
// so no phase drift accumulates.
std::complex<double> empirical_amplitude(const DualPoint& y,
                                         const KFreeParams& params,
                                         const Lattice& lat, double R,
                                         int threads = 0);

struct SpectrumRow {
  std::vector<Rational> y;
  std::int64_t q = 1;
  double intensity = 0.0;
  double ratio = 0.0;  // intensity / intensity at the origin
};

// Spectrum table for plotting: intensity and origin-relative ratio per point.
std::vector<SpectrumRow> spectrum_table(const SpectrumWindow& window,
                                        const KFreeParams& params,
                                        const Lattice& lat);

}  // namespace kfreelat

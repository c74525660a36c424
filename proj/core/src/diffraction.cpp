#include "kfreelat/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "kfreelat/numeric.hpp"
#include "kfreelat/parallel.hpp"

namespace kfreelat {

namespace {

// Distinct prime factors; q must be >= 1 and desk scale.
std::vector<std::int64_t> distinct_primes(std::int64_t q) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d != 0) continue;
    out.push_back(d);
    while (q % d == 0) q /= d;
  }
  if (q > 1) out.push_back(q);
  return out;
}

}  // namespace

bool in_spectrum(std::int64_t q, const KFreeParams& params) {
  if (q < 1) return false;
  return is_kfree_integer(q, params.k + 1);
}

double intensity(std::int64_t q, const KFreeParams& params) {
  if (q < 1)
    throw std::domain_error("intensity: denominator must be >= 1, got " +
                            std::to_string(q));
  if (!is_kfree_integer(q, params.k + 1))
    throw std::domain_error(
        "intensity: denominator " + std::to_string(q) +
        " is outside the spectrum, a prime power p^" +
        std::to_string(params.k + 1) + " divides it");
  int nk = params.n * params.k;
  double amp = density_exact(params).value;
  for (std::int64_t p : distinct_primes(q))
    amp /= ipow(static_cast<double>(p), nk) - 1.0;
  return amp * amp;
}

std::vector<SpectrumPoint> enumerate_spectrum(const SpectrumWindow& window,
                                              const KFreeParams& params,
                                              const Lattice& lat) {
  if (lat.n != params.n)
    throw std::invalid_argument(
        "enumerate_spectrum: lattice dimension mismatch");
  if (static_cast<int>(window.box.size()) != params.n)
    throw std::invalid_argument(
        "enumerate_spectrum: box dimension mismatch");
  for (const auto& [lo, hi] : window.box)
    if (lo > hi)
      throw std::invalid_argument("enumerate_spectrum: empty box axis");
  if (!(window.threshold > 0.0) || window.threshold > 1.0)
    throw std::invalid_argument(
        "enumerate_spectrum: threshold must lie in (0, 1]");

  // I(y)/I(0) = prod 1/(p^(nk)-1)^2 over p | q, so the floor keeps exactly
  // the q with prod (p^(nk)-1) <= 1/sqrt(threshold).
  const int nk = params.n * params.k;
  const double bound = (1.0 + 1e-12) / std::sqrt(window.threshold) + 1e-12;

  std::vector<std::int64_t> primes;
  {
    std::int64_t pmax = static_cast<std::int64_t>(
        std::floor(std::pow(bound + 1.0, 1.0 / nk) + 1e-9)) + 1;
    if (pmax >= 2)
      for (std::int64_t p : sieve_primes(pmax))
        if (ipow(static_cast<double>(p), nk) - 1.0 <= bound) primes.push_back(p);
  }

  // Valid denominators: products of distinct primes from the list, each with
  // multiplicity 1..k, while the (p^(nk)-1) product stays under the bound.
  std::vector<std::int64_t> denominators;
  struct Frame {
    std::size_t next_prime;
    std::int64_t q;
    double prod;
  };
  std::vector<Frame> stack{{0, 1, 1.0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    denominators.push_back(f.q);
    for (std::size_t i = f.next_prime; i < primes.size(); ++i) {
      std::int64_t p = primes[i];
      double prod = f.prod * (ipow(static_cast<double>(p), nk) - 1.0);
      if (prod > bound) break;  // primes ascend, factors only grow
      std::int64_t q = f.q;
      for (int e = 1; e <= params.k; ++e) {
        if (q > std::numeric_limits<std::int64_t>::max() / p) break;
        q *= p;
        stack.push_back({i + 1, q, prod});
      }
    }
  }
  std::sort(denominators.begin(), denominators.end());

  std::vector<SpectrumPoint> out;
  for (std::int64_t q : denominators) {
    double inten = intensity(q, params);
    // Numerator box per axis, then keep vectors coprime to q so den(y) = q.
    std::vector<std::int64_t> lo(window.box.size()), hi(window.box.size());
    bool empty = false;
    for (std::size_t d = 0; d < window.box.size(); ++d) {
      lo[d] = static_cast<std::int64_t>(
          std::ceil(window.box[d].first * q - 1e-9));
      hi[d] = static_cast<std::int64_t>(
          std::floor(window.box[d].second * q + 1e-9));
      if (lo[d] > hi[d]) empty = true;
    }
    if (empty) continue;
    std::vector<std::int64_t> a(window.box.size());
    // Odometer over the numerator box, last axis fastest.
    for (std::size_t d = 0; d < a.size(); ++d) a[d] = lo[d];
    bool done = false;
    while (!done) {
      std::int64_t g = 0;
      for (std::int64_t c : a) g = std::gcd(g, c < 0 ? -c : c);
      bool primitive = (q == 1) || std::gcd(g, q) == 1;
      if (primitive) {
        SpectrumPoint pt;
        pt.q = q;
        pt.intensity = inten;
        pt.y.reserve(a.size());
        for (std::int64_t c : a) pt.y.emplace_back(c, q);
        out.push_back(std::move(pt));
      }
      std::size_t axis = a.size();
      for (;;) {
        if (axis == 0) {
          done = true;
          break;
        }
        --axis;
        if (++a[axis] <= hi[axis]) break;
        a[axis] = lo[axis];
      }
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const SpectrumPoint& a, const SpectrumPoint& b) {
                     if (a.intensity != b.intensity)
                       return a.intensity > b.intensity;
                     return std::lexicographical_compare(
                         a.y.begin(), a.y.end(), b.y.begin(), b.y.end());
                   });
  return out;
}

std::complex<double> empirical_amplitude(const DualPoint& y,
                                         const KFreeParams& params,
                                         const Lattice& lat, double R,
                                         int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument(
        "empirical_amplitude: lattice dimension mismatch");
  if (static_cast<int>(y.coords.size()) != params.n)
    throw std::invalid_argument(
        "empirical_amplitude: dual point dimension mismatch");
  if (R <= 0.0)
    throw std::invalid_argument("empirical_amplitude: radius must be positive");

  // y . x in the dual pairing is (sum a_i x_i) / q with a_i = num_i q/den_i;
  // only the residue of the integer dot mod q matters, so the exponential
  // comes from a q-entry table and the phase stays exact.
  const std::int64_t q = y.den;
  std::vector<std::int64_t> scaled(y.coords.size());
  for (std::size_t d = 0; d < y.coords.size(); ++d)
    scaled[d] = y.coords[d].num * (q / y.coords[d].den);
  std::vector<double> cos_table(static_cast<std::size_t>(q));
  std::vector<double> sin_table(static_cast<std::size_t>(q));
  for (std::int64_t r = 0; r < q; ++r) {
    double phase = -2.0 * M_PI * static_cast<double>(r) / static_cast<double>(q);
    cos_table[static_cast<std::size_t>(r)] = std::cos(phase);
    sin_table[static_cast<std::size_t>(r)] = std::sin(phase);
  }

  BallScan scan(lat, R, Eigen::VectorXd::Zero(lat.n), BallKind::open);
  Eigen::MatrixXd inv = lat.basis.inverse();
  double coord_reach = 0.0;
  for (int i = 0; i < lat.n; ++i)
    coord_reach = std::max(coord_reach, inv.row(i).norm());
  std::int64_t gcd_bound =
      static_cast<std::int64_t>(std::ceil(coord_reach * R + 2.0));
  std::unique_ptr<KfreeSieve> sieve;
  if (params.k >= 2)
    sieve = std::make_unique<KfreeSieve>(gcd_bound, params.k);

  struct Partial {
    KahanSum re, im;
  };
  std::vector<Partial> partials(scan.slab_count());
  parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
    scan.scan_slab(s, [&](const Point& u) {
      std::int64_t g = 0;
      std::int64_t dot = 0;
      for (std::size_t d = 0; d < u.size(); ++d) {
        g = std::gcd(g, u[d] < 0 ? -u[d] : u[d]);
        dot += scaled[d] * u[d];
      }
      bool member = g != 0 && (params.k == 1 ? g == 1 : (*sieve)(g));
      if (!member) return;
      std::int64_t r = ((dot % q) + q) % q;
      partials[s].re.add(cos_table[static_cast<std::size_t>(r)]);
      partials[s].im.add(sin_table[static_cast<std::size_t>(r)]);
    });
  });

  KahanSum re, im;
  for (const Partial& p : partials) {
    re.add(p.re.value());
    im.add(p.im.value());
  }
  double vol = unit_ball_volume(params.n) * std::pow(R, params.n);
  return {re.value() / vol, im.value() / vol};
}

std::vector<SpectrumRow> spectrum_table(const SpectrumWindow& window,
                                        const KFreeParams& params,
                                        const Lattice& lat) {
  double origin = intensity(1, params);
  std::vector<SpectrumPoint> points = enumerate_spectrum(window, params, lat);
  std::vector<SpectrumRow> rows;
  rows.reserve(points.size());
  for (SpectrumPoint& pt : points) {
    SpectrumRow row;
    row.y = std::move(pt.y);
    row.q = pt.q;
    row.intensity = pt.intensity;
    row.ratio = pt.intensity / origin;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kfreelat

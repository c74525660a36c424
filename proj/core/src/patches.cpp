#include "kfreelat/patches.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "kfreelat/errors.hpp"
#include "kfreelat/numeric.hpp"
#include "kfreelat/parallel.hpp"

namespace kfreelat {

Configuration patch_at(const KFreeParams& params, const Lattice& lat,
                       const Point& t, double rho) {
  if (lat.n != params.n)
    throw std::invalid_argument("patch_at: lattice dimension mismatch");
  if (static_cast<int>(t.size()) != params.n)
    throw std::invalid_argument("patch_at: translate dimension mismatch");
  if (rho <= 0.0)
    throw std::invalid_argument("patch_at: window radius must be positive");
  Configuration out;
  out.window_radius = rho;
  Point shifted(t.size());
  for (const Point& u : points_in_ball(lat, rho, BallKind::open)) {
    for (std::size_t d = 0; d < t.size(); ++d) shifted[d] = t[d] + u[d];
    if (is_kfree_point(shifted, params)) out.points.push_back(u);
  }
  return out;
}

std::string canonical_patch_key(const std::vector<Point>& points) {
  std::vector<Point> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::string key = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) key += ",";
    key += "(";
    for (std::size_t d = 0; d < sorted[i].size(); ++d) {
      if (d) key += ",";
      key += std::to_string(sorted[i][d]);
    }
    key += ")";
  }
  key += "}";
  return key;
}

std::string canonical_patch_key(const Configuration& cfg) {
  return canonical_patch_key(cfg.points);
}

namespace {

constexpr std::size_t kMaskBits = 63;
constexpr int kMaxFreeBits = 22;  // inclusion-exclusion term budget 2^22

std::vector<Point> window_points(const Lattice& lat, double rho) {
  if (rho <= 0.0)
    throw std::invalid_argument("window radius must be positive");
  return points_in_ball(lat, rho, BallKind::open);
}

std::string key_from_mask(const std::vector<Point>& window,
                          std::uint64_t mask) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < window.size(); ++i)
    if (mask & (std::uint64_t(1) << i)) pts.push_back(window[i]);
  return canonical_patch_key(pts);
}

}  // namespace

PatchCensus census(const KFreeParams& params, const Lattice& lat, double rho,
                   double scan_radius, int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument("census: lattice dimension mismatch");
  if (scan_radius <= 0.0)
    throw std::invalid_argument("census: scan radius must be positive");
  PatchCensus result;
  result.rho = rho;
  result.scan_radius = scan_radius;
  result.window = window_points(lat, rho);
  if (result.window.size() > kMaskBits)
    throw ResourceError("census: window exceeds the bitmask budget",
                        result.window.size(), kMaskBits);

  const std::vector<Point>& win = result.window;
  const int n = params.n;

  // The gcd of any visited point is bounded by its largest coordinate, which
  // the scan box bounds; that sizes the sieve for k >= 2.
  BallScan scan(lat, scan_radius, Eigen::VectorXd::Zero(n), BallKind::open);
  Eigen::MatrixXd inv = lat.basis.inverse();
  double coord_reach = 0.0;
  for (int i = 0; i < n; ++i)
    coord_reach = std::max(coord_reach, inv.row(i).norm());
  std::int64_t gcd_bound = static_cast<std::int64_t>(
      std::ceil(coord_reach * (scan_radius + rho) + 2.0));
  std::unique_ptr<KfreeSieve> sieve;
  if (params.k >= 2)
    sieve = std::make_unique<KfreeSieve>(gcd_bound, params.k);

  struct SlabEntry {
    std::int64_t count = 0;
    Point first;
  };
  using SlabMap = std::unordered_map<std::uint64_t, SlabEntry>;
  std::vector<SlabMap> slabs(scan.slab_count());
  std::vector<std::int64_t> translate_counts(scan.slab_count(), 0);

  parallel_for_index(scan.slab_count(), threads, [&](std::size_t s) {
    scan.scan_slab(s, [&](const Point& t) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < win.size(); ++i) {
        std::int64_t g = 0;
        for (std::size_t d = 0; d < t.size(); ++d) {
          std::int64_t c = t[d] + win[i][d];
          g = std::gcd(g, c < 0 ? -c : c);
        }
        bool member = g != 0 && (params.k == 1 ? g == 1 : (*sieve)(g));
        if (member) mask |= std::uint64_t(1) << i;
      }
      auto [it, inserted] = slabs[s].try_emplace(mask);
      if (inserted) it->second.first = t;
      ++it->second.count;
      ++translate_counts[s];
    });
  });

  std::map<std::uint64_t, PatchCensus::Entry> merged;
  for (std::size_t s = 0; s < slabs.size(); ++s) {
    result.translate_count += translate_counts[s];
    // Within a slab the hash map lost scan order; the slab's first_translate
    // entries are still the earliest of that slab, and slabs merge in scan
    // order, so the earliest slab wins.
    std::vector<std::pair<std::uint64_t, SlabEntry>> items(slabs[s].begin(),
                                                           slabs[s].end());
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [mask, entry] : items) {
      auto [it, inserted] = merged.try_emplace(mask);
      if (inserted) {
        it->second.first_translate = entry.first;
        it->second.mask = mask;
      }
      it->second.count += entry.count;
    }
  }
  for (auto& [mask, entry] : merged)
    result.patches.emplace(key_from_mask(win, mask), entry);
  return result;
}

double frequency_empirical(const PatchCensus& cen, const Configuration& patch) {
  if (std::abs(patch.window_radius - cen.rho) > 1e-12)
    throw std::invalid_argument(
        "frequency_empirical: patch window radius does not match the census");
  int n = 0;
  if (!cen.window.empty())
    n = static_cast<int>(cen.window.front().size());
  else if (!cen.patches.empty())
    n = static_cast<int>(cen.patches.begin()->second.first_translate.size());
  else
    throw std::invalid_argument("frequency_empirical: empty census");
  double vol = unit_ball_volume(n) * std::pow(cen.scan_radius, n);
  auto it = cen.patches.find(canonical_patch_key(patch));
  if (it == cen.patches.end()) return 0.0;
  return static_cast<double>(it->second.count) / vol;
}

namespace {

// Shared state for exact frequencies over one window.
//
// The inclusion-exclusion term for the occupied set S factors over primes as
// (1 - c_p(S)/p^(nk)) with c_p the occupied class count mod p^k. Two window
// points can share a class only while p^k min_norm <= diameter(window), and
// saturation needs p^(nk) <= |W|; those finitely many primes keep their
// exact class bitmasks. Every later prime sees |S| distinct classes, so its
// factor depends on m = |S| alone: primes up to the cutoff enter a per-m
// product, and the tail beyond the cutoff is bracketed through the certified
// prime zeta value. Escalating the cutoff tightens the bracket in place.
class FrequencyContext {
 public:
  FrequencyContext(std::vector<Point> window, const KFreeParams& params,
                   const Lattice& lat)
      : window_(std::move(window)), nk_(params.n * params.k) {
    if (window_.size() > kMaskBits)
      throw ResourceError("frequency: window exceeds the bitmask budget",
                          window_.size(), kMaskBits);

    double diameter = 0.0;
    for (const Point& u : window_)
      diameter = std::max(diameter, 2.0 * std::sqrt(lat.norm2(u)));
    double geo_p =
        std::pow(diameter / lat.min_norm + 1.0, 1.0 / params.k);
    double pig_p = window_.empty()
                       ? 0.0
                       : std::pow(static_cast<double>(window_.size()),
                                  1.0 / nk_);
    std::int64_t bound = static_cast<std::int64_t>(
        std::ceil(std::max(geo_p, pig_p))) + 1;
    for (std::int64_t p : sieve_primes(std::max<std::int64_t>(bound, 2))) {
      bool geometric =
          ipow(static_cast<double>(p), params.k) * lat.min_norm <=
          diameter + 1e-9;
      bool pigeonhole = ipow(static_cast<double>(p), nk_) <=
                        static_cast<double>(window_.size());
      if (!geometric && !pigeonhole) continue;
      ExactPrime ep;
      ep.p = p;
      ep.pnk = ipow(static_cast<double>(p), nk_);
      std::int64_t pk = ipow64(p, params.k);
      std::map<Point, std::uint64_t> classes;
      for (std::size_t i = 0; i < window_.size(); ++i)
        classes[reduce_mod(window_[i], pk)] |= std::uint64_t(1) << i;
      for (auto& [cls, mask] : classes) ep.class_masks.push_back(mask);
      exact_.push_back(std::move(ep));
    }
    escalate(2048);
  }

  std::int64_t cutoff() const { return cutoff_; }

  FrequencyResult frequency(std::uint64_t patch_mask, double tolerance) {
    if (!(tolerance > 0.0))
      throw std::invalid_argument("frequency: tolerance must be positive");
    for (;;) {
      FrequencyResult r = evaluate(patch_mask);
      if (r.truncation_error <= tolerance) return r;
      if (cutoff_ >= 2'000'000)
        throw ResourceError(
            "frequency: certified error stuck above tolerance at the prime "
            "cutoff cap",
            static_cast<std::uint64_t>(cutoff_) * 8, 2'000'000);
      escalate(cutoff_ * 8);
    }
  }

 private:
  struct ExactPrime {
    std::int64_t p = 0;
    double pnk = 0.0;
    std::vector<std::uint64_t> class_masks;
  };

  void escalate(std::int64_t new_cutoff) {
    for (const auto& ep : exact_)
      new_cutoff = std::max(new_cutoff, ep.p + 1);
    if (new_cutoff <= cutoff_) return;
    cutoff_ = new_cutoff;

    std::vector<std::int64_t> mids;
    for (std::int64_t p : sieve_primes(cutoff_)) {
      bool is_exact = false;
      for (const auto& ep : exact_)
        if (ep.p == p) is_exact = true;
      if (!is_exact) mids.push_back(p);
    }

    std::size_t mmax = window_.size();
    mid_product_.assign(mmax + 1, 1.0);
    for (std::size_t m = 1; m <= mmax; ++m) {
      double prod = 1.0;
      for (std::int64_t p : mids)
        prod *=
            1.0 - static_cast<double>(m) / ipow(static_cast<double>(p), nk_);
      mid_product_[m] = prod;
    }

    // Tail product over p > cutoff:
    //   -m S_hi - m^2 Q / (2 (1 - x1))  <=  log T(m)  <=  -m S_lo
    // where [S_lo, S_hi] brackets sum p^(-nk) over the tail via the
    // certified prime zeta value minus the partial sum, Q bounds
    // sum p^(-2nk) by an integral, and x1 bounds each m/p^(nk).
    CertifiedValue pz = prime_zeta(nk_);
    KahanSum partial;
    for (std::int64_t p : sieve_primes(cutoff_))
      partial.add(ipow(1.0 / static_cast<double>(p), nk_));
    double part = partial.value();
    double cushion = 4e-16 * (part + pz.value);
    double s_lo =
        std::max(0.0, (pz.value - pz.truncation_error) - part - cushion);
    double s_hi = (pz.value + pz.truncation_error) - part + cushion;
    double q_hi = std::pow(static_cast<double>(cutoff_), 1.0 - 2.0 * nk_) /
                  (2.0 * nk_ - 1.0);

    tail_lo_.assign(mmax + 1, 1.0);
    tail_hi_.assign(mmax + 1, 1.0);
    for (std::size_t m = 1; m <= mmax; ++m) {
      double md = static_cast<double>(m);
      double x1 = md / ipow(static_cast<double>(cutoff_), nk_);
      tail_lo_[m] = std::exp(-md * s_hi - 0.5 * md * md * q_hi / (1.0 - x1));
      tail_hi_[m] = std::exp(-md * s_lo);
    }
  }

  FrequencyResult evaluate(std::uint64_t patch_mask) const {
    std::uint64_t full = window_.size() >= 64
                             ? ~std::uint64_t(0)
                             : ((std::uint64_t(1) << window_.size()) - 1);
    if ((patch_mask & ~full) != 0)
      throw std::invalid_argument("frequency: patch outside the window");
    std::uint64_t complement = full & ~patch_mask;
    int free_bits = std::popcount(complement);
    if (free_bits > kMaxFreeBits)
      throw ResourceError("frequency: inclusion-exclusion term budget",
                          std::uint64_t(1) << free_bits,
                          std::uint64_t(1) << kMaxFreeBits);
    std::vector<std::uint64_t> free_positions;
    for (std::size_t i = 0; i < window_.size(); ++i)
      if (complement & (std::uint64_t(1) << i))
        free_positions.push_back(std::uint64_t(1) << i);

    KahanSum total;
    double err = 0.0;
    double abs_sum = 0.0;
    std::int64_t terms = 0;
    const std::uint64_t subsets = std::uint64_t(1) << free_bits;
    for (std::uint64_t f = 0; f < subsets; ++f) {
      std::uint64_t s_mask = patch_mask;
      for (int b = 0; b < free_bits; ++b)
        if (f & (std::uint64_t(1) << b)) s_mask |= free_positions[b];
      double exact_factor = 1.0;
      for (const auto& ep : exact_) {
        int hit = 0;
        for (std::uint64_t cm : ep.class_masks)
          if (cm & s_mask) ++hit;
        exact_factor *= 1.0 - static_cast<double>(hit) / ep.pnk;
        if (exact_factor == 0.0) break;
      }
      if (exact_factor == 0.0) continue;
      std::size_t m = static_cast<std::size_t>(std::popcount(s_mask));
      double base = exact_factor * mid_product_[m];
      double mid = 0.5 * (tail_lo_[m] + tail_hi_[m]);
      double half = 0.5 * (tail_hi_[m] - tail_lo_[m]);
      double sign = (std::popcount(f) % 2 == 0) ? 1.0 : -1.0;
      total.add(sign * base * mid);
      err += std::abs(base) * half;
      abs_sum += std::abs(base) * mid;
      ++terms;
    }
    FrequencyResult out;
    out.value = total.value();
    out.truncation_error = err + 2e-16 * abs_sum;
    out.prime_cutoff = cutoff_;
    out.term_count = terms;
    return out;
  }

  std::vector<Point> window_;
  int nk_;
  std::vector<ExactPrime> exact_;
  std::int64_t cutoff_ = 0;
  std::vector<double> mid_product_;
  std::vector<double> tail_lo_, tail_hi_;
};

}  // namespace

FrequencyResult frequency_exact(const Configuration& patch,
                                const KFreeParams& params, const Lattice& lat,
                                double tolerance) {
  if (lat.n != params.n)
    throw std::invalid_argument("frequency_exact: lattice dimension mismatch");
  std::vector<Point> window = window_points(lat, patch.window_radius);
  std::map<Point, std::size_t> index;
  for (std::size_t i = 0; i < window.size(); ++i) index.emplace(window[i], i);
  std::uint64_t mask = 0;
  for (const Point& p : patch.points) {
    auto it = index.find(p);
    if (it == index.end())
      throw std::invalid_argument(
          "frequency_exact: patch point outside the window ball");
    mask |= std::uint64_t(1) << it->second;
  }
  FrequencyContext ctx(std::move(window), params, lat);
  return ctx.frequency(mask, tolerance);
}

std::vector<FrequencyRow> frequency_table(const PatchCensus& cen,
                                          const KFreeParams& params,
                                          const Lattice& lat,
                                          double tolerance) {
  FrequencyContext ctx(cen.window, params, lat);
  double vol =
      unit_ball_volume(params.n) * std::pow(cen.scan_radius, params.n);
  std::vector<FrequencyRow> rows;
  rows.reserve(cen.patches.size());
  for (const auto& [key, entry] : cen.patches) {
    FrequencyResult fr = ctx.frequency(entry.mask, tolerance);
    FrequencyRow row;
    row.patch = key;
    row.empirical = static_cast<double>(entry.count) / vol;
    row.exact = fr.value;
    row.truncation_error = fr.truncation_error;
    rows.push_back(std::move(row));
  }
  return rows;
}

ConsistencyReport measure_consistency(const KFreeParams& params,
                                      const Lattice& lat, double rho,
                                      double tolerance) {
  if (lat.n != params.n)
    throw std::invalid_argument(
        "measure_consistency: lattice dimension mismatch");
  std::vector<Point> window = window_points(lat, rho);
  if (window.size() > 16)
    throw ResourceError("measure_consistency: full subset enumeration budget",
                        window.size(), 16);
  FrequencyContext ctx(window, params, lat);
  ConsistencyReport report;
  KahanSum total;
  const std::uint64_t subsets = std::uint64_t(1) << window.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    FrequencyResult fr = ctx.frequency(mask, tolerance);
    total.add(fr.value);
    report.truncation_error += fr.truncation_error;
    ++report.patch_count;
  }
  report.total = total.value();
  return report;
}

EntropyReport entropy_estimate(const KFreeParams& params, const Lattice& lat,
                               double rho, double scan_radius, int threads) {
  if (lat.n != params.n)
    throw std::invalid_argument("entropy_estimate: lattice dimension mismatch");
  EntropyReport report;
  report.limit = density_exact(params).value;
  report.interpolation_lower = density_estimate(params, lat, rho, threads);
  std::vector<Point> window = window_points(lat, rho);
  double vol = unit_ball_volume(params.n) * std::pow(rho, params.n);
  if (window.size() <= kMaskBits) {
    PatchCensus cen = census(params, lat, rho, scan_radius, threads);
    report.distinct_patches = static_cast<std::int64_t>(cen.distinct());
    report.empirical = std::log2(static_cast<double>(cen.distinct())) / vol;
  } else {
    report.distinct_patches = -1;
    report.empirical = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace kfreelat

#include "kfreelat/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "kfreelat/errors.hpp"
#include "kfreelat/numeric.hpp"

namespace kfreelat {

BigPoint to_big(const Point& p) {
  BigPoint out;
  out.reserve(p.size());
  for (Coord c : p) out.emplace_back(c);
  return out;
}

bool to_small(const BigPoint& p, Point& out) {
  out.clear();
  out.reserve(p.size());
  for (const BigInt& c : p) {
    if (c < std::numeric_limits<Coord>::min() ||
        c > std::numeric_limits<Coord>::max())
      return false;
    out.push_back(static_cast<Coord>(c));
  }
  return true;
}

std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
  if (limit < 2)
    throw std::invalid_argument("sieve_primes: limit must be >= 2, got " +
                                std::to_string(limit));
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    primes.push_back(p);
    for (std::int64_t q = p * p; q <= limit; q += p)
      composite[static_cast<std::size_t>(q)] = true;
  }
  return primes;
}

bool is_prime(std::int64_t m) {
  if (m < 2) return false;
  if (m < 4) return true;
  if (m % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= m; d += 2)
    if (m % d == 0) return false;
  return true;
}

int moebius(std::int64_t m) {
  if (m < 1)
    throw std::invalid_argument("moebius: argument must be >= 1, got " +
                                std::to_string(m));
  int factors = 0;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d != 0) continue;
    m /= d;
    if (m % d == 0) return 0;
    ++factors;
  }
  if (m > 1) ++factors;
  return (factors % 2 == 0) ? 1 : -1;
}

bool is_kfree_integer(std::int64_t m, int k) {
  if (m < 1)
    throw std::invalid_argument("is_kfree_integer: argument must be >= 1, got " +
                                std::to_string(m));
  if (k < 1)
    throw std::invalid_argument("is_kfree_integer: order must be >= 1, got " +
                                std::to_string(k));
  if (k == 1) return m == 1;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d != 0) continue;
    int mult = 0;
    while (m % d == 0) {
      m /= d;
      ++mult;
    }
    if (mult >= k) return false;
  }
  // Leftover factor is prime with multiplicity 1 < k.
  return true;
}

KfreeSieve::KfreeSieve(std::int64_t limit, int k) : limit_(limit), k_(k) {
  if (limit < 1)
    throw std::invalid_argument("KfreeSieve: limit must be >= 1, got " +
                                std::to_string(limit));
  if (k < 1)
    throw std::invalid_argument("KfreeSieve: order must be >= 1, got " +
                                std::to_string(k));
  kfree_.assign(static_cast<std::size_t>(limit) + 1, true);
  kfree_[0] = false;
  if (limit < 2) return;
  for (std::int64_t p : sieve_primes(limit)) {
    // Mark multiples of p^k. Overflow-safe: stop once p^k would pass limit.
    double pk = ipow(static_cast<double>(p), k);
    if (pk > static_cast<double>(limit)) break;
    std::int64_t step = ipow64(p, k);
    for (std::int64_t q = step; q <= limit; q += step)
      kfree_[static_cast<std::size_t>(q)] = false;
  }
}

bool KfreeSieve::operator()(std::int64_t m) const {
  if (m < 1 || m > limit_)
    throw std::out_of_range("KfreeSieve: argument " + std::to_string(m) +
                            " outside [1, " + std::to_string(limit_) + "]");
  return kfree_[static_cast<std::size_t>(m)];
}

namespace {

std::map<std::pair<int, double>, CertifiedValue> g_zeta_cache;
std::map<int, CertifiedValue> g_prime_zeta_cache;
std::mutex g_cache_mutex;

}  // namespace

CertifiedValue zeta(int s, double target_error) {
  if (s < 2)
    throw std::domain_error("zeta: series requires s >= 2, got " +
                            std::to_string(s));
  if (!(target_error > 0.0))
    throw std::invalid_argument("zeta: target_error must be positive");
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_zeta_cache.find({s, target_error});
    if (it != g_zeta_cache.end()) return it->second;
  }

  // Tail over n > N lies between the integrals from N+1 and from N:
  //   (N+1)^(1-s)/(s-1)  <=  tail  <=  N^(1-s)/(s-1).
  // Adding the midpoint halves the uncertainty to the half-width below.
  auto half_width = [s](double n) {
    return (std::pow(n, 1.0 - s) - std::pow(n + 1.0, 1.0 - s)) /
           (2.0 * (s - 1.0));
  };
  std::int64_t n_terms = 16;
  const std::int64_t n_cap = std::int64_t(1) << 26;
  while (half_width(static_cast<double>(n_terms)) > 0.5 * target_error &&
         n_terms < n_cap)
    n_terms *= 2;

  KahanSum sum;
  for (std::int64_t n = n_terms; n >= 1; --n)
    sum.add(ipow(1.0 / static_cast<double>(n), s));
  double tail_lo = std::pow(static_cast<double>(n_terms) + 1.0, 1.0 - s) /
                   (s - 1.0);
  double tail_hi = std::pow(static_cast<double>(n_terms), 1.0 - s) / (s - 1.0);
  CertifiedValue out;
  out.value = sum.value() + 0.5 * (tail_lo + tail_hi);
  out.truncation_error = 0.5 * (tail_hi - tail_lo) + 4e-16 * out.value;

  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_zeta_cache.emplace(std::make_pair(s, target_error), out);
  return out;
}

CertifiedValue prime_zeta(int s) {
  if (s < 2)
    throw std::domain_error("prime_zeta: requires s >= 2, got " +
                            std::to_string(s));
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_prime_zeta_cache.find(s);
    if (it != g_prime_zeta_cache.end()) return it->second;
  }

  // P(s) = sum_{r>=1} mu(r)/r log zeta(rs). For t >= 2,
  // zeta(t) - 1 <= 2^-t (1 + 2/(t-1)) <= 3 * 2^-t, so |log zeta(t)| <= 3*2^-t
  // and the series truncates with a geometric tail bound.
  KahanSum total;
  double err = 0.0;
  int r = 1;
  for (;; ++r) {
    double term_bound = 3.0 * std::pow(2.0, -static_cast<double>(r) * s) / r;
    if (r > 1 && term_bound < 1e-18) {
      // Remaining terms r' > r-1 are dominated by twice the bound at r.
      err += 2.0 * term_bound;
      break;
    }
    int mu = moebius(r);
    if (mu == 0) continue;
    CertifiedValue z = zeta(r * s, 1e-14);
    total.add(mu * std::log(z.value) / r);
    err += z.truncation_error / ((z.value - z.truncation_error) * r);
  }
  CertifiedValue out;
  out.value = total.value();
  out.truncation_error = err + 4e-16 * std::abs(out.value);

  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_prime_zeta_cache.emplace(s, out);
  return out;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  if (m < 1) throw std::invalid_argument("mod_inverse: modulus must be >= 1");
  // Extended Euclid on (a mod m, m).
  BigInt r0 = ((a % m) + m) % m, r1 = m;
  BigInt t0 = 1, t1 = 0;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    BigInt t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1)
    throw std::invalid_argument("mod_inverse: arguments are not coprime");
  return ((t0 % m) + m) % m;
}

BigPoint crt_solve(const std::vector<CrtResidue>& residues) {
  if (residues.empty())
    throw std::invalid_argument("crt_solve: no residues given");
  std::size_t dim = residues.front().target.size();
  for (const auto& res : residues) {
    if (res.modulus < 2)
      throw std::invalid_argument("crt_solve: each modulus must be >= 2");
    if (res.target.size() != dim)
      throw std::invalid_argument("crt_solve: mixed target dimensions");
  }
  for (std::size_t i = 0; i < residues.size(); ++i)
    for (std::size_t j = i + 1; j < residues.size(); ++j) {
      BigInt g = gcd(residues[i].modulus, residues[j].modulus);
      if (g != 1)
        throw std::invalid_argument(
            "crt_solve: moduli " + residues[i].modulus.str() + " and " +
            residues[j].modulus.str() + " (positions " + std::to_string(i) +
            ", " + std::to_string(j) + ") share factor " + g.str());
    }

  // Incremental merge: maintain c mod M, fold in each residue.
  BigPoint c(dim, BigInt(0));
  BigInt big_mod = 1;
  for (const auto& res : residues) {
    BigInt inv = mod_inverse(big_mod % res.modulus, res.modulus);
    for (std::size_t d = 0; d < dim; ++d) {
      BigInt want = ((res.target[d] % res.modulus) + res.modulus) % res.modulus;
      BigInt delta = ((want - c[d]) % res.modulus + res.modulus) % res.modulus;
      c[d] += big_mod * ((delta * inv) % res.modulus);
    }
    big_mod *= res.modulus;
  }
  for (std::size_t d = 0; d < dim; ++d) c[d] %= big_mod;
  return c;
}

}  // namespace kfreelat

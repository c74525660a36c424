#pragma once

#include <cstdint>
#include <vector>

#include "kfreelat/types.hpp"

namespace kfreelat {

// All primes <= limit, ascending. limit must be >= 2.
std::vector<std::int64_t> sieve_primes(std::int64_t limit);

bool is_prime(std::int64_t m);

// Moebius function; m must be >= 1.
int moebius(std::int64_t m);

// True iff no k-th prime power divides m. m must be >= 1, k >= 1.
// For k = 1 only m = 1 qualifies.
bool is_kfree_integer(std::int64_t m, int k);

// Bulk k-free predicate over [1, limit], backed by a sieve.
class KfreeSieve {
 public:
  KfreeSieve(std::int64_t limit, int k);

  bool operator()(std::int64_t m) const;
  std::int64_t limit() const { return limit_; }
  int k() const { return k_; }

 private:
  std::int64_t limit_;
  int k_;
  std::vector<bool> kfree_;
};

// A real number together with a certified bound: the true value lies within
// truncation_error of value.
struct CertifiedValue {
  double value = 0.0;
  double truncation_error = 0.0;
};

// Riemann zeta at integer s >= 2. The tail of the partial sum is bracketed by
// integrals from both ends and the midpoint is returned, so truncation_error
// is half the bracket width plus a rounding cushion. target_error is the
// half-width aimed for; values land at or below it for every s >= 2.
CertifiedValue zeta(int s, double target_error = 1e-12);

// Prime zeta function P(s) = sum over primes of p^(-s), s >= 2, via the
// Moebius inversion P(s) = sum_r mu(r)/r log zeta(rs). Certified.
CertifiedValue prime_zeta(int s);

// Componentwise simultaneous congruences. Solves c = target_i mod modulus_i
// for every i, components reduced into [0, prod modulus_i). Moduli must be
// pairwise coprime; violations report the offending pair.
struct CrtResidue {
  BigInt modulus;
  BigPoint target;
};

BigPoint crt_solve(const std::vector<CrtResidue>& residues);

// Inverse of a mod m for coprime a, m >= 1; result in [0, m).
BigInt mod_inverse(const BigInt& a, const BigInt& m);

}  // namespace kfreelat

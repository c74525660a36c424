#include <doctest.h>

#include <cmath>

#include "kfreelat/arithmetic.hpp"
#include "kfreelat/errors.hpp"

using namespace kfreelat;

TEST_SUITE("arithmetic") {

TEST_CASE("prime sieve matches known counts and entries") {
  auto primes = sieve_primes(100);
  CHECK(primes.size() == 25);
  CHECK(primes.front() == 2);
  CHECK(primes.back() == 97);
  CHECK(sieve_primes(2) == std::vector<std::int64_t>{2});
  CHECK_THROWS_AS(sieve_primes(1), std::invalid_argument);

  auto big = sieve_primes(10000);
  CHECK(big.size() == 1229);
  for (std::int64_t p : big) CHECK(is_prime(p));
}

TEST_CASE("trial division primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK(is_prime(7919));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(-7));
  CHECK_FALSE(is_prime(91));  // 7 * 13
}

TEST_CASE("moebius values") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(2) == -1);
  CHECK(moebius(4) == 0);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  CHECK(moebius(210) == 1);
  CHECK_THROWS_AS(moebius(0), std::invalid_argument);
}

TEST_CASE("k-free integers against direct factorization") {
  CHECK(is_kfree_integer(1, 1));
  CHECK_FALSE(is_kfree_integer(2, 1));
  CHECK(is_kfree_integer(10, 2));
  CHECK_FALSE(is_kfree_integer(12, 2));  // 4 divides
  CHECK_FALSE(is_kfree_integer(18, 2));  // 9 divides
  CHECK(is_kfree_integer(12, 3));
  CHECK_FALSE(is_kfree_integer(8, 3));
  CHECK_FALSE(is_kfree_integer(49, 2));
  CHECK(is_kfree_integer(2310, 2));
  CHECK_THROWS_AS(is_kfree_integer(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(is_kfree_integer(5, 0), std::invalid_argument);

  // Brute force over prime powers for every m up to 2000.
  for (int k = 2; k <= 4; ++k) {
    for (std::int64_t m = 1; m <= 2000; ++m) {
      bool expect = true;
      for (std::int64_t p = 2; p <= m; ++p) {
        if (!is_prime(p)) continue;
        std::int64_t pk = 1;
        bool overflow = false;
        for (int e = 0; e < k; ++e) {
          pk *= p;
          if (pk > m) {
            overflow = true;
            break;
          }
        }
        if (overflow) break;
        if (m % pk == 0) {
          expect = false;
          break;
        }
      }
      CHECK(is_kfree_integer(m, k) == expect);
    }
  }
}

TEST_CASE("bulk sieve agrees with the scalar predicate") {
  for (int k = 1; k <= 3; ++k) {
    KfreeSieve sieve(5000, k);
    for (std::int64_t m = 1; m <= 5000; ++m) {
      bool scalar = (k == 1) ? (m == 1) : is_kfree_integer(m, k);
      CHECK(sieve(m) == scalar);
    }
  }
  KfreeSieve sieve(100, 2);
  CHECK_THROWS_AS(sieve(0), std::out_of_range);
  CHECK_THROWS_AS(sieve(101), std::out_of_range);
}

TEST_CASE("zeta values carry certified brackets") {
  struct Ref {
    int s;
    double value;
  };
  // pi^2/6, pi^4/90, pi^6/945, and the Apery constant.
  const Ref refs[] = {{2, 1.6449340668482264},
                      {3, 1.2020569031595943},
                      {4, 1.0823232337111382},
                      {6, 1.0173430619844491}};
  for (const Ref& r : refs) {
    CertifiedValue z = zeta(r.s);
    CHECK(z.truncation_error <= 1e-12);
    CHECK(std::abs(z.value - r.value) <= z.truncation_error + 1e-13);
  }
  CHECK_THROWS_AS(zeta(1), std::domain_error);
  CHECK_THROWS_AS(zeta(2, -1.0), std::invalid_argument);

  // Monotone decreasing toward 1.
  double prev = zeta(2).value;
  for (int s = 3; s <= 12; ++s) {
    double cur = zeta(s).value;
    CHECK(cur < prev);
    CHECK(cur > 1.0);
    prev = cur;
  }
}

TEST_CASE("zeta bracket contains a long reference partial sum") {
  // Independent check: 10^7 terms summed small-to-large plus integral
  // bounds of the remainder must intersect the certified interval.
  const int s = 2;
  double sum = 0.0;
  const double n_terms = 1e7;
  for (double n = n_terms; n >= 1.0; n -= 1.0) sum += 1.0 / (n * n);
  double lo = sum + std::pow(n_terms + 1.0, -1.0) / 1.0;
  double hi = sum + std::pow(n_terms, -1.0);
  CertifiedValue z = zeta(s);
  CHECK(z.value + z.truncation_error >= lo - 1e-9);
  CHECK(z.value - z.truncation_error <= hi + 1e-9);
}

TEST_CASE("prime zeta at 2 matches the literature value") {
  CertifiedValue p2 = prime_zeta(2);
  CHECK(std::abs(p2.value - 0.4522474200410655) <=
        p2.truncation_error + 1e-12);
  CHECK(p2.truncation_error <= 1e-10);

  // Partial prime sums approach the certified value from below.
  double partial = 0.0;
  for (std::int64_t p : sieve_primes(100000))
    partial += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
  CHECK(partial < p2.value);
  CHECK(p2.value - partial < 1e-4);

  CertifiedValue p4 = prime_zeta(4);
  CHECK(p4.value > 1.0 / 16.0 + 1.0 / 81.0);
  CHECK(p4.value < zeta(4).value - 1.0);
  CHECK_THROWS_AS(prime_zeta(1), std::domain_error);
}

TEST_CASE("modular inverse") {
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(10, 21) == 19);
  CHECK(mod_inverse(BigInt("123456789"), BigInt("1000000007")) *
            BigInt("123456789") %
            BigInt("1000000007") ==
        1);
  CHECK_THROWS_AS(mod_inverse(6, 9), std::invalid_argument);
}

TEST_CASE("componentwise simultaneous congruences") {
  // One dimension, moduli 4, 9, 25.
  std::vector<CrtResidue> sys;
  sys.push_back({4, {BigInt(1)}});
  sys.push_back({9, {BigInt(0)}});
  sys.push_back({25, {BigInt(24)}});
  BigPoint c = crt_solve(sys);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == 549);

  // Two dimensions.
  std::vector<CrtResidue> sys2;
  sys2.push_back({2, {BigInt(1), BigInt(0)}});
  sys2.push_back({5, {BigInt(3), BigInt(2)}});
  BigPoint c2 = crt_solve(sys2);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0] == 3);
  CHECK(c2[1] == 2);

  // Residues reduce into the product range.
  std::vector<CrtResidue> sys3;
  sys3.push_back({7, {BigInt(-1)}});
  sys3.push_back({11, {BigInt(-1)}});
  BigPoint c3 = crt_solve(sys3);
  CHECK(c3[0] == 76);  // -1 mod 77

  // Shared factors are rejected with the offending pair named.
  std::vector<CrtResidue> bad;
  bad.push_back({6, {BigInt(1)}});
  bad.push_back({10, {BigInt(3)}});
  CHECK_THROWS_WITH_AS(crt_solve(bad),
                       doctest::Contains("positions 0, 1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(crt_solve({}), std::invalid_argument);
}

TEST_CASE("random congruence systems round trip") {
  // Deterministic seed; verify the defining property directly.
  std::uint64_t state = 12345;
  auto next = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  };
  const std::int64_t moduli[] = {4, 9, 25, 49, 121};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CrtResidue> sys;
    BigInt product = 1;
    for (std::int64_t m : moduli) {
      CrtResidue r;
      r.modulus = m;
      r.target = {BigInt(static_cast<std::int64_t>(next() % m)),
                  BigInt(static_cast<std::int64_t>(next() % m))};
      product *= m;
      sys.push_back(std::move(r));
    }
    BigPoint c = crt_solve(sys);
    for (const auto& r : sys)
      for (std::size_t d = 0; d < 2; ++d)
        CHECK((c[d] - r.target[d]) % r.modulus == 0);
    for (std::size_t d = 0; d < 2; ++d) {
      CHECK(c[d] >= 0);
      CHECK(c[d] < product);
    }
  }
}

}  // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kfreelat/dynamics.hpp"
#include "kfreelat/errors.hpp"
#include "kfreelat/patches.hpp"

using namespace kfreelat;

TEST_SUITE("dynamics") {

TEST_CASE("distance between agreeing windows stays undecided") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration small = generate(params, z2, 5.0);
  Configuration large = generate(params, z2, 8.0);
  DistanceBound d = config_distance(small, large, z2);
  CHECK_FALSE(d.decided);
  CHECK(d.value == doctest::Approx(1.0 / 5.0));

  DistanceBound same = config_distance(large, large, z2);
  CHECK_FALSE(same.decided);
  CHECK(same.value == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("distance detects the first disagreement radius") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration a = generate(params, z2, 8.0);

  Configuration b = a;
  Point gone = {3, 4};  // length five, well inside both windows
  b.points.erase(std::remove(b.points.begin(), b.points.end(), gone),
                 b.points.end());
  DistanceBound d = config_distance(a, b, z2);
  CHECK(d.decided);
  CHECK(d.value == doctest::Approx(1.0 / 5.0));

  // A disagreement at radius one saturates the metric.
  Configuration c = a;
  Point near = {1, 0};
  c.points.erase(std::remove(c.points.begin(), c.points.end(), near),
                 c.points.end());
  DistanceBound d1 = config_distance(a, c, z2);
  CHECK(d1.decided);
  CHECK(d1.value == doctest::Approx(1.0));

  // Differences outside the smaller window cannot be certified.
  Configuration trimmed = generate(params, z2, 3.0);
  DistanceBound d2 = config_distance(b, trimmed, z2);
  CHECK_FALSE(d2.decided);
  CHECK(d2.value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("proximality witness on the plane") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  ProximalityWitness w = proximality_witness({1, 0}, 1.0, params, z2);
  CHECK(w.rho == doctest::Approx(1.0));
  CHECK(w.shift == Point{1, 0});
  // The two window balls overlap in two offsets: 5 + 5 - 2 congruences.
  CHECK(w.certificate.assignments.size() == 8);
  CHECK(w.certificate.prime_product == BigInt(9699690));
  CHECK(w.translate == w.certificate.center);
  CHECK(verify_witness(w, params, z2));
}

TEST_CASE("proximality witness on the squarefree line") {
  KFreeParams params(1, 2);
  Lattice z1 = Lattice::hypercubic(1);
  ProximalityWitness w = proximality_witness({3}, 1.0, params, z1);
  // Window {-1,0,1} and its pullback {-4,-3,-2} are disjoint.
  CHECK(w.certificate.assignments.size() == 6);
  CHECK(w.certificate.prime_product == BigInt(30030));
  CHECK(verify_witness(w, params, z1));

  // Both windows really are empty: check literally when the center fits.
  BigInt modulus = w.certificate.coset_modulus(params.k);
  CHECK(modulus == BigInt(30030) * 30030);
}

TEST_CASE("witness with a large window survives big integer checking") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  ProximalityWitness w = proximality_witness({1, 1}, 2.0, params, z2);
  CHECK(w.certificate.assignments.size() == 18);
  // Far beyond machine range; verification goes through the congruences.
  CHECK(w.certificate.prime_product > BigInt(std::int64_t(1) << 62));
  CHECK(verify_witness(w, params, z2));
}

TEST_CASE("tampered witnesses are rejected") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  ProximalityWitness w = proximality_witness({1, 0}, 1.0, params, z2);
  REQUIRE(verify_witness(w, params, z2));

  ProximalityWitness shifted = w;
  shifted.translate[0] += 1;
  CHECK_FALSE(verify_witness(shifted, params, z2));

  ProximalityWitness moved = w;
  moved.translate[0] += 1;
  moved.certificate.center[0] += 1;
  CHECK_FALSE(verify_witness(moved, params, z2));

  ProximalityWitness fake_prime = w;
  fake_prime.certificate.assignments[2].prime = 9;
  CHECK_FALSE(verify_witness(fake_prime, params, z2));

  ProximalityWitness wider = w;
  wider.rho = 1.5;
  CHECK_FALSE(verify_witness(wider, params, z2));
}

TEST_CASE("witness construction rejects bad input") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  CHECK_THROWS_AS(proximality_witness({0, 0}, 1.0, params, z2),
                  std::invalid_argument);
  CHECK_THROWS_AS(proximality_witness({1, 0}, 0.0, params, z2),
                  std::invalid_argument);
  CHECK_THROWS_AS(proximality_witness({1, 0}, 6.0, params, z2, 64),
                  ResourceError);
}

TEST_CASE("orbit visit frequencies approach the patch frequency") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration patch_q = patch_at(params, z2, {1, 0}, 1.1);
  FrequencyResult nu = frequency_exact(patch_q, params, z2);

  // Several starting patches, one target: the visit densities all land on
  // the same frequency.
  for (const Point& t : {Point{1, 0}, Point{0, 0}, Point{2, 2}}) {
    Configuration patch_p = patch_at(params, z2, t, 1.1);
    double visits = ergodicity_evidence(patch_p, patch_q, params, z2, 200.0);
    CHECK(std::abs(visits - nu.value) < 0.01);
  }
}

TEST_CASE("orbit evidence requires the start patch to occur") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  // The unit square saturates the residues mod 2, so no translate shows it.
  Configuration impossible;
  impossible.window_radius = 1.5;
  impossible.points = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  Configuration target = patch_at(params, z2, {1, 0}, 1.5);
  CHECK_THROWS_AS(
      ergodicity_evidence(impossible, target, params, z2, 60.0),
      std::invalid_argument);
}

TEST_CASE("orbit averages match exact frequencies") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration patch = patch_at(params, z2, {1, 0}, 1.1);
  GenericityReport report = genericity_check(patch, params, z2, 200.0);
  FrequencyResult nu = frequency_exact(patch, params, z2);
  CHECK(report.frequency == doctest::Approx(nu.value));
  CHECK(report.gap ==
        doctest::Approx(std::abs(report.orbit_average - report.frequency)));
  CHECK(report.gap < 0.01);

  // The empty patch as well: holes of radius 1.1 are rare but present.
  Configuration empty;
  empty.window_radius = 1.1;
  GenericityReport report0 = genericity_check(empty, params, z2, 200.0);
  CHECK(report0.gap < 0.01);
  CHECK(report0.orbit_average > 0.0);
}

TEST_CASE("squarefree line dynamics") {
  KFreeParams params(1, 2);
  Lattice z1 = Lattice::hypercubic(1);
  Configuration patch = patch_at(params, z1, {4}, 1.5);
  CHECK(canonical_patch_key(patch) == "{(-1),(1)}");  // 4 itself is not squarefree
  GenericityReport report = genericity_check(patch, params, z1, 40000.0);
  CHECK(report.gap < 0.005);
}

}  // TEST_SUITE

#include <doctest.h>

#include <stdexcept>
#include <variant>

#include <json.hpp>

#include "kfreelat/json_io.hpp"

using namespace kfreelat;
using nlohmann::json;

TEST_SUITE("json") {

TEST_CASE("lattice round trip") {
  Lattice z3 = Lattice::hypercubic(3);
  Lattice back = lattice_from_json(lattice_to_json(z3));
  CHECK(back.n == 3);
  CHECK(back.is_hypercubic());
  CHECK(back.min_norm == doctest::Approx(1.0));

  Eigen::MatrixXd shear(2, 2);
  shear << 1, 1, 0, 1;  // columns (1,0) and (1,1)
  Lattice oblique = Lattice::from_basis(shear);
  Lattice oblique_back = lattice_from_json(lattice_to_json(oblique));
  CHECK(oblique_back.n == 2);
  CHECK_FALSE(oblique_back.is_hypercubic());
  CHECK(oblique_back.min_norm == doctest::Approx(oblique.min_norm));
  CHECK((oblique_back.basis - oblique.basis).norm() < 1e-12);
  CHECK((oblique_back.gram - oblique.gram).norm() < 1e-12);
}

TEST_CASE("configuration round trip") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration cfg = generate(params, z2, 3.5);
  Configuration back = configuration_from_json(configuration_to_json(cfg));
  CHECK(back.window_radius == cfg.window_radius);
  CHECK(back.points == cfg.points);
}

TEST_CASE("hole certificate survives the file format") {
  KFreeParams params(1, 2);
  Lattice z1 = Lattice::hypercubic(1);
  HoleCertificate cert = find_hole(params, z1, 1.0);
  std::string text = hole_to_json(cert, params, z1);

  json doc = json::parse(text);
  CHECK(doc.at("type") == "hole");
  CHECK(doc.at("n") == 1);
  CHECK(doc.at("k") == 2);
  CHECK(doc.at("center").at(0) == "549");
  CHECK(doc.at("prime_product") == "30");

  CertificateFile file = certificate_from_json(text);
  CHECK(file.params.n == 1);
  CHECK(file.params.k == 2);
  REQUIRE(std::holds_alternative<HoleCertificate>(file.payload));
  const HoleCertificate& back = std::get<HoleCertificate>(file.payload);
  CHECK(back.center == cert.center);
  CHECK(back.radius == cert.radius);
  CHECK(back.prime_product == cert.prime_product);
  REQUIRE(back.assignments.size() == cert.assignments.size());
  for (std::size_t i = 0; i < back.assignments.size(); ++i) {
    CHECK(back.assignments[i].offset == cert.assignments[i].offset);
    CHECK(back.assignments[i].prime == cert.assignments[i].prime);
  }
  CHECK(verify_hole(back, file.params, file.lattice));
}

TEST_CASE("witness certificate survives the file format") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  ProximalityWitness w = proximality_witness({1, 0}, 1.0, params, z2);
  std::string text = witness_to_json(w, params, z2);

  json doc = json::parse(text);
  CHECK(doc.at("type") == "proximality");
  CHECK(doc.at("shift") == json::array({1, 0}));
  CHECK(doc.at("rho") == 1.0);

  CertificateFile file = certificate_from_json(text);
  REQUIRE(std::holds_alternative<ProximalityWitness>(file.payload));
  const ProximalityWitness& back = std::get<ProximalityWitness>(file.payload);
  CHECK(back.shift == w.shift);
  CHECK(back.rho == w.rho);
  CHECK(back.translate == w.translate);
  CHECK(back.certificate.prime_product == w.certificate.prime_product);
  CHECK(verify_witness(back, file.params, file.lattice));
}

TEST_CASE("census serializes its table") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  PatchCensus cen = census(params, z2, 1.1, 40.0);
  json doc = json::parse(census_to_json(cen, params));
  CHECK(doc.at("n") == 2);
  CHECK(doc.at("k") == 1);
  CHECK(doc.at("rho") == 1.1);
  CHECK(doc.at("scan_radius") == 40.0);
  CHECK(doc.at("distinct_patches") == cen.distinct());
  CHECK(doc.at("translate_count") == cen.translate_count);
  CHECK(doc.at("patches").size() == cen.patches.size());
  for (const auto& [key, entry] : cen.patches) {
    CHECK(doc.at("patches").at(key).at("count") == entry.count);
    CHECK(doc.at("patches").at(key).at("first_translate").size() == 2);
  }
}

TEST_CASE("serialization is stable byte for byte") {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  HoleCertificate cert = find_hole(params, z2, 1.0);
  CHECK(hole_to_json(cert, params, z2) == hole_to_json(cert, params, z2));
  PatchCensus cen = census(params, z2, 1.1, 30.0);
  CHECK(census_to_json(cen, params) == census_to_json(cen, params));
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS(lattice_from_json("{\"n\": 2}"));
  CHECK_THROWS(lattice_from_json("not json"));
  CHECK_THROWS(configuration_from_json("{\"points\": 3}"));
  CHECK_THROWS(certificate_from_json("{\"type\": \"unknown\"}"));
  CHECK_THROWS_AS(
      certificate_from_json("{\"type\": \"hole\", \"n\": 1, \"k\": 1}"),
      std::exception);
}

}  // TEST_SUITE

#include "kfreelat/json_io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace kfreelat {

using json = nlohmann::ordered_json;

namespace {

json point_to_json(const Point& p) {
  json arr = json::array();
  for (Coord c : p) arr.push_back(c);
  return arr;
}

Point point_from_json(const json& arr) {
  if (!arr.is_array())
    throw std::invalid_argument("json: expected a coordinate array");
  Point p;
  p.reserve(arr.size());
  for (const auto& c : arr) {
    if (!c.is_number_integer())
      throw std::invalid_argument("json: coordinates must be integers");
    p.push_back(c.get<Coord>());
  }
  return p;
}

json big_point_to_json(const BigPoint& p) {
  json arr = json::array();
  for (const BigInt& c : p) arr.push_back(c.str());
  return arr;
}

BigPoint big_point_from_json(const json& arr) {
  if (!arr.is_array())
    throw std::invalid_argument("json: expected a coordinate array");
  BigPoint p;
  p.reserve(arr.size());
  for (const auto& c : arr) {
    if (!c.is_string())
      throw std::invalid_argument(
          "json: big coordinates must be decimal strings");
    p.emplace_back(c.get<std::string>());
  }
  return p;
}

json lattice_to_json_obj(const Lattice& lat) {
  json j;
  j["n"] = lat.n;
  json basis = json::array();
  // Row i of the file is basis vector i, a column of the matrix.
  for (int i = 0; i < lat.n; ++i) {
    json row = json::array();
    for (int r = 0; r < lat.n; ++r) row.push_back(lat.basis(r, i));
    basis.push_back(row);
  }
  j["basis"] = basis;
  j["min_norm"] = lat.min_norm;
  return j;
}

Lattice lattice_from_json_obj(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("lattice json: missing integer field n");
  int n = j["n"].get<int>();
  if (n < 1) throw std::invalid_argument("lattice json: n must be >= 1");
  if (!j.contains("basis") || !j["basis"].is_array() ||
      static_cast<int>(j["basis"].size()) != n)
    throw std::invalid_argument("lattice json: basis must be n rows");
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j["basis"][static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("lattice json: basis rows must have n entries");
    for (int r = 0; r < n; ++r)
      basis(r, i) = row[static_cast<std::size_t>(r)].get<double>();
  }
  std::optional<double> min_norm;
  if (j.contains("min_norm")) min_norm = j["min_norm"].get<double>();
  if (basis.isIdentity(1e-12)) {
    Lattice lat = Lattice::hypercubic(n);
    return lat;
  }
  return Lattice::from_basis(basis, min_norm);
}

json hole_to_json_obj(const HoleCertificate& cert) {
  json j;
  j["radius"] = cert.radius;
  j["center"] = big_point_to_json(cert.center);
  j["prime_product"] = cert.prime_product.str();
  json assignments = json::array();
  for (const auto& a : cert.assignments) {
    json entry;
    entry["offset"] = point_to_json(a.offset);
    entry["prime"] = a.prime;
    assignments.push_back(entry);
  }
  j["assignments"] = assignments;
  return j;
}

HoleCertificate hole_from_json_obj(const json& j) {
  HoleCertificate cert;
  if (!j.contains("radius") || !j.contains("center") ||
      !j.contains("prime_product") || !j.contains("assignments"))
    throw std::invalid_argument("certificate json: missing hole fields");
  cert.radius = j["radius"].get<double>();
  cert.center = big_point_from_json(j["center"]);
  cert.prime_product = BigInt(j["prime_product"].get<std::string>());
  for (const auto& entry : j["assignments"]) {
    HoleCertificate::Assignment a;
    a.offset = point_from_json(entry.at("offset"));
    a.prime = entry.at("prime").get<std::int64_t>();
    cert.assignments.push_back(std::move(a));
  }
  return cert;
}

}  // namespace

std::string lattice_to_json(const Lattice& lat) {
  return lattice_to_json_obj(lat).dump(2) + "\n";
}

Lattice lattice_from_json(const std::string& text) {
  return lattice_from_json_obj(json::parse(text));
}

std::string configuration_to_json(const Configuration& cfg) {
  json j;
  j["window_radius"] = cfg.window_radius;
  json pts = json::array();
  for (const Point& p : cfg.points) pts.push_back(point_to_json(p));
  j["points"] = pts;
  return j.dump(2) + "\n";
}

Configuration configuration_from_json(const std::string& text) {
  json j = json::parse(text);
  Configuration cfg;
  if (!j.contains("points") || !j["points"].is_array())
    throw std::invalid_argument("configuration json: missing points array");
  if (!j.contains("window_radius"))
    throw std::invalid_argument("configuration json: missing window_radius");
  cfg.window_radius = j["window_radius"].get<double>();
  for (const auto& p : j["points"]) cfg.points.push_back(point_from_json(p));
  return cfg;
}

std::string hole_to_json(const HoleCertificate& cert, const KFreeParams& params,
                         const Lattice& lat) {
  json j;
  j["type"] = "hole";
  j["n"] = params.n;
  j["k"] = params.k;
  j["lattice"] = lattice_to_json_obj(lat);
  json hole = hole_to_json_obj(cert);
  for (auto& [key, value] : hole.items()) j[key] = value;
  return j.dump(2) + "\n";
}

std::string witness_to_json(const ProximalityWitness& witness,
                            const KFreeParams& params, const Lattice& lat) {
  json j;
  j["type"] = "proximality";
  j["n"] = params.n;
  j["k"] = params.k;
  j["lattice"] = lattice_to_json_obj(lat);
  j["rho"] = witness.rho;
  j["shift"] = point_to_json(witness.shift);
  j["translate"] = big_point_to_json(witness.translate);
  j["certificate"] = hole_to_json_obj(witness.certificate);
  return j.dump(2) + "\n";
}

CertificateFile certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("certificate json: missing type field");
  std::string type = j["type"].get<std::string>();
  if (!j.contains("n") || !j.contains("k"))
    throw std::invalid_argument("certificate json: missing n or k");
  KFreeParams params(j["n"].get<int>(), j["k"].get<int>());
  if (!j.contains("lattice"))
    throw std::invalid_argument("certificate json: missing lattice");
  Lattice lat = lattice_from_json_obj(j["lattice"]);

  if (type == "hole") {
    return CertificateFile{params, lat, hole_from_json_obj(j)};
  }
  if (type == "proximality") {
    ProximalityWitness w;
    w.rho = j.at("rho").get<double>();
    w.shift = point_from_json(j.at("shift"));
    w.translate = big_point_from_json(j.at("translate"));
    w.certificate = hole_from_json_obj(j.at("certificate"));
    return CertificateFile{params, lat, std::move(w)};
  }
  throw std::invalid_argument("certificate json: unknown type \"" + type +
                              "\"");
}

std::string census_to_json(const PatchCensus& cen, const KFreeParams& params) {
  json j;
  j["n"] = params.n;
  j["k"] = params.k;
  j["rho"] = cen.rho;
  j["scan_radius"] = cen.scan_radius;
  j["translate_count"] = cen.translate_count;
  j["distinct_patches"] = cen.patches.size();
  json patches = json::object();
  for (const auto& [key, entry] : cen.patches) {
    json e;
    e["count"] = entry.count;
    e["first_translate"] = point_to_json(entry.first_translate);
    patches[key] = e;
  }
  j["patches"] = patches;
  return j.dump(2) + "\n";
}

}  // namespace kfreelat

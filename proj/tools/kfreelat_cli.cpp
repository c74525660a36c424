#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kfreelat/kfreelat.hpp"

using namespace kfreelat;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Output files land in KFREELAT_OUT_DIR when one is set and the path is
// relative; an empty path means stdout. When the payload goes to a file, a
// one-line summary goes to stdout instead.
void emit(const std::string& out_path, const std::string& text,
          const std::string& summary = "") {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path p = out_path;
  if (const char* dir = std::getenv("KFREELAT_OUT_DIR"))
    if (*dir && p.is_relative()) p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!summary.empty())
    std::cout << summary << " -> " << p.string() << "\n";
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

Point parse_point(const std::string& text) {
  Point p;
  for (const std::string& part : split(text, ','))
    p.push_back(std::stoll(part));
  if (p.empty()) throw std::invalid_argument("empty coordinate list");
  return p;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  for (const std::string& part : split(text, ',')) {
    std::size_t slash = part.find('/');
    if (slash == std::string::npos) {
      out.push_back(Rational(std::stoll(part), 1));
    } else {
      out.push_back(Rational(std::stoll(part.substr(0, slash)),
                             std::stoll(part.substr(slash + 1))));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty coordinate list");
  return out;
}

std::vector<std::pair<double, double>> parse_box(const std::string& text) {
  std::vector<std::pair<double, double>> box;
  for (const std::string& part : split(text, ',')) {
    std::size_t colon = part.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("box axis needs lo:hi, got " + part);
    box.emplace_back(std::stod(part.substr(0, colon)),
                     std::stod(part.substr(colon + 1)));
  }
  if (box.empty()) throw std::invalid_argument("empty box");
  return box;
}

// Common problem setup shared by most subcommands.
struct Problem {
  int n = 0;
  int k = 0;
  std::string lattice_path;
  int threads = 0;
  std::string out;

  void add_options(CLI::App* sub, bool needs_params = true) {
    if (needs_params) {
      sub->add_option("-n,--dimension", n, "Lattice dimension");
      sub->add_option("-k,--power", k, "Prime power k")->required();
      sub->add_option("--lattice", lattice_path,
                      "Lattice JSON file (default: hypercubic of dimension n)");
    }
    sub->add_option("--threads", threads,
                    "Worker threads, 0 for the hardware default");
    sub->add_option("-o,--out", out, "Output file (default: stdout)");
  }

  Lattice lattice() const {
    if (lattice_path.empty()) {
      if (n <= 0)
        throw std::invalid_argument("pass -n or --lattice to fix the lattice");
      return Lattice::hypercubic(n);
    }
    Lattice lat = lattice_from_json(read_file(lattice_path));
    if (n > 0 && lat.n != n)
      throw std::invalid_argument("-n disagrees with the lattice file");
    return lat;
  }

  KFreeParams params(const Lattice& lat) const { return KFreeParams(lat.n, k); }
};

int run(int argc, char** argv) {
  CLI::App app{"k-free lattice points: generation, holes, patch statistics, "
               "diffraction, dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kfreelat 0.1.0");

  // generate
  auto gen = std::make_shared<Problem>();
  double gen_radius = 0.0;
  std::string gen_format = "json";
  CLI::App* gen_cmd = app.add_subcommand(
      "generate", "Emit the point configuration in an open ball");
  gen->add_options(gen_cmd);
  gen_cmd->add_option("-r,--radius", gen_radius, "Ball radius")->required();
  gen_cmd->add_option("--format", gen_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  gen_cmd->callback([gen, &gen_radius, &gen_format] {
    Lattice lat = gen->lattice();
    Configuration cfg =
        generate(gen->params(lat), lat, gen_radius, gen->threads);
    std::string payload;
    if (gen_format == "csv") {
      for (int d = 0; d < lat.n; ++d)
        payload += (d ? "," : "") + ("x" + std::to_string(d + 1));
      payload += "\n";
      for (const Point& p : cfg.points) {
        for (int d = 0; d < lat.n; ++d)
          payload += (d ? "," : "") + std::to_string(p[static_cast<std::size_t>(d)]);
        payload += "\n";
      }
    } else {
      payload = configuration_to_json(cfg);
    }
    emit(gen->out, payload,
         std::to_string(cfg.points.size()) + " points");
  });

  // density
  auto dens = std::make_shared<Problem>();
  double dens_radius = 0.0;
  CLI::App* dens_cmd = app.add_subcommand(
      "density", "Finite ball density against the closed form");
  dens->add_options(dens_cmd);
  dens_cmd->add_option("-r,--radius", dens_radius, "Ball radius")->required();
  dens_cmd->callback([dens, &dens_radius] {
    Lattice lat = dens->lattice();
    KFreeParams params = dens->params(lat);
    double estimate = density_estimate(params, lat, dens_radius, dens->threads);
    CertifiedValue exact = density_exact(params);
    ordered_json doc;
    doc["n"] = params.n;
    doc["k"] = params.k;
    doc["radius"] = dens_radius;
    doc["estimate"] = estimate;
    doc["exact"] = exact.value;
    doc["truncation_error"] = exact.truncation_error;
    doc["gap"] = std::abs(estimate - exact.value);
    emit(dens->out, doc.dump(2) + "\n",
         "density gap " + csv_number(doc["gap"].get<double>()));
  });

  // holes
  auto hole = std::make_shared<Problem>();
  double hole_radius = 0.0;
  std::uint64_t hole_bits = kDefaultBitBudget;
  CLI::App* hole_cmd = app.add_subcommand(
      "holes", "Certified empty ball of the requested radius");
  hole->add_options(hole_cmd);
  hole_cmd->add_option("-r,--radius", hole_radius, "Hole radius")->required();
  hole_cmd->add_option("--max-bits", hole_bits,
                       "Bit budget for the coset modulus");
  hole_cmd->callback([hole, &hole_radius, &hole_bits] {
    Lattice lat = hole->lattice();
    KFreeParams params = hole->params(lat);
    HoleCertificate cert = find_hole(params, lat, hole_radius, hole_bits);
    emit(hole->out, hole_to_json(cert, params, lat),
         "hole with " + std::to_string(cert.assignments.size()) +
             " congruences");
  });

  // patches
  auto pat = std::make_shared<Problem>();
  double pat_rho = 0.0, pat_scan = 0.0;
  CLI::App* pat_cmd = app.add_subcommand(
      "patches", "Census of window patches over a scan ball");
  pat->add_options(pat_cmd);
  pat_cmd->add_option("--rho", pat_rho, "Window radius")->required();
  pat_cmd->add_option("--scan", pat_scan, "Scan ball radius")->required();
  pat_cmd->callback([pat, &pat_rho, &pat_scan] {
    Lattice lat = pat->lattice();
    KFreeParams params = pat->params(lat);
    PatchCensus cen = census(params, lat, pat_rho, pat_scan, pat->threads);
    emit(pat->out, census_to_json(cen, params),
         std::to_string(cen.distinct()) + " distinct patches");
  });

  // freq
  auto freq = std::make_shared<Problem>();
  double freq_rho = 0.0, freq_scan = 0.0, freq_tol = 1e-9;
  CLI::App* freq_cmd = app.add_subcommand(
      "freq", "Empirical and exact patch frequencies as CSV");
  freq->add_options(freq_cmd);
  freq_cmd->add_option("--rho", freq_rho, "Window radius")->required();
  freq_cmd->add_option("--scan", freq_scan, "Scan ball radius")->required();
  freq_cmd->add_option("--tolerance", freq_tol,
                       "Certified error target per frequency");
  freq_cmd->callback([freq, &freq_rho, &freq_scan, &freq_tol] {
    Lattice lat = freq->lattice();
    KFreeParams params = freq->params(lat);
    PatchCensus cen = census(params, lat, freq_rho, freq_scan, freq->threads);
    std::vector<FrequencyRow> rows =
        frequency_table(cen, params, lat, freq_tol);
    std::string csv = "patch,empirical,exact,truncation_error\n";
    for (const FrequencyRow& row : rows) {
      csv += csv_field(row.patch) + "," + csv_number(row.empirical) + "," +
             csv_number(row.exact) + "," + csv_number(row.truncation_error) +
             "\n";
    }
    emit(freq->out, csv, std::to_string(rows.size()) + " patch rows");
  });

  // entropy
  auto ent = std::make_shared<Problem>();
  double ent_rho = 0.0, ent_scan = 0.0;
  CLI::App* ent_cmd = app.add_subcommand(
      "entropy", "Patch counting entropy estimates");
  ent->add_options(ent_cmd);
  ent_cmd->add_option("--rho", ent_rho, "Window radius")->required();
  ent_cmd->add_option("--scan", ent_scan, "Scan ball radius")->required();
  ent_cmd->callback([ent, &ent_rho, &ent_scan] {
    Lattice lat = ent->lattice();
    KFreeParams params = ent->params(lat);
    EntropyReport report =
        entropy_estimate(params, lat, ent_rho, ent_scan, ent->threads);
    ordered_json doc;
    doc["n"] = params.n;
    doc["k"] = params.k;
    doc["rho"] = ent_rho;
    doc["scan_radius"] = ent_scan;
    doc["empirical"] = report.empirical;  // null when the window overflows
    doc["interpolation_lower"] = report.interpolation_lower;
    doc["limit"] = report.limit;
    doc["distinct_patches"] = report.distinct_patches;
    emit(ent->out, doc.dump(2) + "\n",
         "entropy bounds written");
  });

  // spectrum
  auto spect = std::make_shared<Problem>();
  std::string spect_box;
  double spect_threshold = 1e-6;
  CLI::App* spect_cmd = app.add_subcommand(
      "spectrum", "Diffraction peaks above a relative intensity as CSV");
  spect->add_options(spect_cmd);
  spect_cmd->add_option("--box", spect_box, "Per axis lo:hi ranges, e.g. 0:1,0:1")
      ->required();
  spect_cmd->add_option("--threshold", spect_threshold,
                       "Relative intensity floor");
  spect_cmd->callback([spect, &spect_box, &spect_threshold] {
    Lattice lat = spect->lattice();
    KFreeParams params = spect->params(lat);
    SpectrumWindow window;
    window.box = parse_box(spect_box);
    window.threshold = spect_threshold;
    if (static_cast<int>(window.box.size()) != lat.n)
      throw std::invalid_argument("box axes disagree with the dimension");
    std::vector<SpectrumRow> rows = spectrum_table(window, params, lat);
    std::string csv;
    for (int d = 0; d < lat.n; ++d) csv += "y" + std::to_string(d + 1) + ",";
    csv += "q,intensity,ratio\n";
    for (const SpectrumRow& row : rows) {
      for (const Rational& c : row.y) csv += csv_field(c.str()) + ",";
      csv += std::to_string(row.q) + "," + csv_number(row.intensity) + "," +
             csv_number(row.ratio) + "\n";
    }
    emit(spect->out, csv, std::to_string(rows.size()) + " peaks");
  });

  // diffraction
  auto diff = std::make_shared<Problem>();
  std::string diff_y;
  double diff_radius = 0.0;
  CLI::App* diff_cmd = app.add_subcommand(
      "diffraction",
      "Finite volume amplitude at a dual point against the prediction");
  diff->add_options(diff_cmd);
  diff_cmd->add_option("-y", diff_y, "Dual point, e.g. 1/2,0")->required();
  diff_cmd->add_option("-r,--radius", diff_radius, "Ball radius")->required();
  diff_cmd->callback([diff, &diff_y, &diff_radius] {
    Lattice lat = diff->lattice();
    KFreeParams params = diff->params(lat);
    DualPoint y(parse_rationals(diff_y));
    if (static_cast<int>(y.coords.size()) != lat.n)
      throw std::invalid_argument("dual point disagrees with the dimension");
    std::complex<double> a =
        empirical_amplitude(y, params, lat, diff_radius, diff->threads);
    bool bragg = in_spectrum(y.den, params);
    double predicted = bragg ? intensity(y.den, params) : 0.0;
    ordered_json doc;
    doc["y"] = ordered_json::array();
    for (const Rational& c : y.coords) doc["y"].push_back(c.str());
    doc["q"] = y.den;
    doc["radius"] = diff_radius;
    doc["amplitude_re"] = a.real();
    doc["amplitude_im"] = a.imag();
    doc["power"] = std::norm(a);
    doc["in_spectrum"] = bragg;
    doc["predicted_intensity"] = predicted;
    doc["gap"] = std::abs(std::norm(a) - predicted);
    emit(diff->out, doc.dump(2) + "\n",
         "amplitude gap " + csv_number(doc["gap"].get<double>()));
  });

  // proximality
  auto prox = std::make_shared<Problem>();
  std::string prox_shift;
  double prox_rho = 0.0;
  std::uint64_t prox_bits = kDefaultBitBudget;
  CLI::App* prox_cmd = app.add_subcommand(
      "proximality", "Witness that the set and a shift come close");
  prox->add_options(prox_cmd);
  prox_cmd->add_option("--shift", prox_shift, "Shift vector, e.g. 1,0")
      ->required();
  prox_cmd->add_option("--rho", prox_rho, "Window radius")->required();
  prox_cmd->add_option("--max-bits", prox_bits,
                       "Bit budget for the coset modulus");
  prox_cmd->callback([prox, &prox_shift, &prox_rho, &prox_bits] {
    Lattice lat = prox->lattice();
    KFreeParams params = prox->params(lat);
    ProximalityWitness w = proximality_witness(parse_point(prox_shift),
                                               prox_rho, params, lat, prox_bits);
    emit(prox->out, witness_to_json(w, params, lat),
         "witness with " +
             std::to_string(w.certificate.assignments.size()) +
             " congruences");
  });

  // check-admissible
  auto adm = std::make_shared<Problem>();
  std::string adm_input;
  CLI::App* adm_cmd = app.add_subcommand(
      "check-admissible", "Test a configuration file for admissibility");
  adm->add_options(adm_cmd);
  adm_cmd->add_option("-i,--input", adm_input, "Configuration JSON file")
      ->required();
  adm_cmd->callback([adm, &adm_input] {
    Configuration cfg = configuration_from_json(read_file(adm_input));
    int n = adm->n;
    if (n <= 0 && !cfg.points.empty())
      n = static_cast<int>(cfg.points.front().size());
    if (n <= 0)
      throw std::invalid_argument("pass -n for an empty configuration");
    KFreeParams params(n, adm->k);
    ordered_json doc;
    doc["n"] = params.n;
    doc["k"] = params.k;
    doc["points"] = cfg.points.size();
    doc["admissible"] = is_admissible(cfg, params);
    emit(adm->out, doc.dump(2) + "\n",
         doc["admissible"].get<bool>() ? std::string("admissible")
                                       : std::string("not admissible"));
  });

  // verify
  std::string verify_input, verify_out;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Re-check a hole or proximality certificate file");
  verify_cmd->add_option("-i,--input", verify_input, "Certificate JSON file")
      ->required();
  verify_cmd->add_option("-o,--out", verify_out, "Output file (default: stdout)");
  bool verify_ok = true;
  verify_cmd->callback([&verify_input, &verify_out, &verify_ok] {
    CertificateFile file = certificate_from_json(read_file(verify_input));
    ordered_json doc;
    doc["n"] = file.params.n;
    doc["k"] = file.params.k;
    if (std::holds_alternative<HoleCertificate>(file.payload)) {
      doc["type"] = "hole";
      verify_ok = verify_hole(std::get<HoleCertificate>(file.payload),
                              file.params, file.lattice);
    } else {
      doc["type"] = "proximality";
      verify_ok = verify_witness(std::get<ProximalityWitness>(file.payload),
                                 file.params, file.lattice);
    }
    doc["valid"] = verify_ok;
    emit(verify_out, doc.dump(2) + "\n",
         verify_ok ? std::string("valid") : std::string("INVALID"));
  });

  CLI11_PARSE(app, argc, argv);

  if (verify_cmd->parsed() && !verify_ok) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ResourceError& e) {
    std::cerr << "resource budget: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

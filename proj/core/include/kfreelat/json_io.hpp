#pragma once

#include <string>
#include <variant>

#include "kfreelat/dynamics.hpp"
#include "kfreelat/kfree.hpp"
#include "kfreelat/lattice.hpp"
#include "kfreelat/patches.hpp"

namespace kfreelat {

// JSON boundary. Everything passes through strings so the header stays free
// of the JSON library; key order is fixed by the writers, so byte-identical
// reruns are guaranteed. Big integers travel as decimal strings.

std::string lattice_to_json(const Lattice& lat);
Lattice lattice_from_json(const std::string& text);

std::string configuration_to_json(const Configuration& cfg);
Configuration configuration_from_json(const std::string& text);

std::string hole_to_json(const HoleCertificate& cert, const KFreeParams& params,
                         const Lattice& lat);
std::string witness_to_json(const ProximalityWitness& witness,
                            const KFreeParams& params, const Lattice& lat);

// Certificate files carry their own parameters and lattice so verification
// needs nothing else. The payload type is dispatched on the "type" field.
struct CertificateFile {
  KFreeParams params;
  Lattice lattice;
  std::variant<HoleCertificate, ProximalityWitness> payload;
};

CertificateFile certificate_from_json(const std::string& text);

std::string census_to_json(const PatchCensus& cen, const KFreeParams& params);

}  // namespace kfreelat

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pqg/errors.hpp"

namespace pqg {

enum class CertificateKind : std::uint8_t {
  triangle_free_exhaustive,
  triangle_free_structural,
  girth,
  gq_axioms,
};

inline const char* to_string(CertificateKind kind) noexcept {
  switch (kind) {
    case CertificateKind::triangle_free_exhaustive: return "triangle-free-exhaustive";
    case CertificateKind::triangle_free_structural: return "triangle-free-structural";
    case CertificateKind::girth: return "girth";
    case CertificateKind::gq_axioms: return "gq-axioms";
  }
  return "unknown";
}

// Outcome of a check. A failing certificate names the violated condition and
// carries ids that let the failure be replayed.
struct Certificate {
  CertificateKind kind = CertificateKind::triangle_free_exhaustive;
  bool pass = true;
  std::string violation;               // empty on pass
  std::vector<std::uint32_t> witness;  // meaning depends on `violation`
  std::map<std::string, std::uint64_t> stats;

  static Certificate passed(CertificateKind kind) { return Certificate{kind, true, {}, {}, {}}; }
  static Certificate failed(CertificateKind kind, std::string violation, std::vector<std::uint32_t> witness) {
    return Certificate{kind, false, std::move(violation), std::move(witness), {}};
  }
};

class CertificateFailure : public Error {
 public:
  explicit CertificateFailure(Certificate cert)
      : Error(std::string(to_string(cert.kind)) + " failed: " + cert.violation), cert_(std::move(cert)) {}
  const Certificate& certificate() const noexcept { return cert_; }

 private:
  Certificate cert_;
};

// Throws CertificateFailure unless the certificate passed.
inline const Certificate& require_pass(const Certificate& cert) {
  if (!cert.pass) throw CertificateFailure(cert);
  return cert;
}

}  // namespace pqg

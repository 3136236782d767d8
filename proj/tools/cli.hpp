#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sheafbar/barcode.hpp"
#include "sheafbar/interleaving.hpp"

namespace sheafbar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

// Environment variable naming a key = value file read before the flags.
inline constexpr const char* kConfigEnv = "SHEAFBAR_CONFIG";

enum class OutputFormat { Human, Machine };

struct Config {
  Scalar field = 2;
  std::uint64_t budget = std::uint64_t{1} << 20;
  std::uint64_t seed = 0;
  double resolution_deg = 5.0;
  double singular_value_threshold = 1e-3;
  double sphere_step_deg = 10.0;
  OutputFormat format = OutputFormat::Human;

  // Throws DomainError when p is not prime or budget is zero.
  void validate() const;
};

// Keys: field, budget, seed, format, resolution-deg, sv-threshold, sphere-step-deg.
// Unknown keys and malformed values are ParseError with the line number.
Config parse_config(const std::string& text, Config base = {});

// One certified block of an interleaving, restricted to `degree` when set.
struct CertificateBlock {
  std::optional<int> degree;
  InterleavingCertificate certificate;
};

struct CertificateFile {
  std::filesystem::path f_path;
  std::filesystem::path g_path;
  std::vector<CertificateBlock> blocks;
};

std::string emit_certificate(const CertificateFile& file);
// Barcode paths are resolved against the certificate's directory when relative.
CertificateFile read_certificate(const std::filesystem::path& path, Field field = Field());
// Every block satisfies verify_certificate against the referenced barcodes.
bool verify_certificate_file(const CertificateFile& file, const Barcode& f, const Barcode& g);

// Truncation of the sum over rationals x of k_[x,inf): x in [0,1] with
// denominator at most n, and the same set with 0 removed and every point moved
// to its successor (the last one to 1 + 1/n).
std::pair<Barcode, Barcode> rational_truncations(int n);

// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sheafbar::cli

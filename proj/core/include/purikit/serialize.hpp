#pragma once

#include "json.hpp"

#include "purikit/eigen_method.hpp"
#include "purikit/sos_method.hpp"
#include "purikit/sos_sdp_fit.hpp"
#include "purikit/spectra.hpp"
#include "purikit/types.hpp"

namespace purikit {

/// Raised for malformed files or schema violations (exit code 2 territory).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Raised for filesystem failures (exit code 4 territory).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Density matrices: {"n_sites": N, "local_dim": d,
//                    "entries": [[re, im], ...] row-major}.
nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

void save_density(const DensityMatrix& rho, const std::string& path);
DensityMatrix load_density(const std::string& path);

nlohmann::json spectrum_to_json(const Spectrum& spec);
nlohmann::json gram_to_json(const GramPolynomial& gp);
nlohmann::json certificate_to_json(const EigenCertificate& cert);
nlohmann::json decay_to_json(const DecayFit& fit);
nlohmann::json purification_to_json(const MPSPurification& psi);

/// Deterministic number formatting shared by all CSV output (%.12g).
std::string csv_num(double x);

/// Minimal CSV writer with a fixed header and %.12g numeric cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& body() const { return body_; }
  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::size_t n_cols_;
  std::string header_;
  std::string body_;
};

void save_text(const std::string& text, const std::string& path);

}  // namespace purikit

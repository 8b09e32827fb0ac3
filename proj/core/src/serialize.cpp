#include "purikit/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace purikit {

json density_to_json(const DensityMatrix& rho) {
  json j;
  j["n_sites"] = rho.n_sites;
  j["local_dim"] = rho.local_dim;
  json entries = json::array();
  const long dim = rho.dim();
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c)
      entries.push_back({rho.data(r, c).real(), rho.data(r, c).imag()});
  j["entries"] = std::move(entries);
  return j;
}

DensityMatrix density_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n_sites") || !j.contains("local_dim") ||
      !j.contains("entries"))
    throw ParseError("density matrix: need n_sites, local_dim, entries");
  int n_sites = j.at("n_sites").get<int>();
  int local_dim = j.at("local_dim").get<int>();
  if (n_sites < 1 || local_dim < 1)
    throw ParseError("density matrix: n_sites and local_dim must be >= 1");
  long dim = ipow(local_dim, n_sites);
  check_dense_cap(dim, "density_from_json");
  const json& entries = j.at("entries");
  if (!entries.is_array() ||
      static_cast<long>(entries.size()) != dim * dim)
    throw ParseError("density matrix: entries must hold dim^2 [re, im] pairs");
  Mat m(dim, dim);
  long idx = 0;
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c, ++idx) {
      const json& e = entries[idx];
      if (!e.is_array() || e.size() != 2)
        throw ParseError("density matrix: entry is not an [re, im] pair");
      m(r, c) = cx(e[0].get<double>(), e[1].get<double>());
    }
  DensityMatrix rho = DensityMatrix::from_dense(
      std::move(m), n_sites, local_dim, false);
  rho.normalized = std::abs(rho.trace - 1.0) <= 1e-10;
  return rho;
}

void save_density(const DensityMatrix& rho, const std::string& path) {
  save_text(density_to_json(rho).dump(2) + "\n", path);
}

DensityMatrix load_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return density_from_json(j);
}

json spectrum_to_json(const Spectrum& spec) {
  json j;
  j["values"] = spec.values;
  j["n_nonzero"] = spec.n_nonzero;
  j["ambient_dim"] = spec.ambient_dim;
  j["m_distinct"] = spec.m_distinct;
  j["normalized"] = spec.normalized;
  return j;
}

json gram_to_json(const GramPolynomial& gp) {
  json j;
  j["k"] = gp.k;
  j["origin"] = gram_origin_name(gp.origin);
  json g = json::array();
  for (int r = 0; r < gp.k; ++r)
    for (int c = 0; c < gp.k; ++c)
      g.push_back({gp.gram(r, c).real(), gp.gram(r, c).imag()});
  j["gram"] = std::move(g);
  return j;
}

json certificate_to_json(const EigenCertificate& cert) {
  json j;
  j["product_indices"] = cert.product_indices;
  j["per_eigenvector_sr"] = cert.per_eigenvector_sr;
  j["osr"] = cert.osr;
  j["n_rank"] = cert.n_rank;
  j["bound_Dn"] = cert.bound_Dn;
  j["bound_Dn2"] = static_cast<long>(cert.osr) * cert.n_rank * cert.n_rank;
  return j;
}

json decay_to_json(const DecayFit& fit) {
  json j;
  j["A"] = fit.A;
  j["B"] = fit.B;
  j["residual"] = fit.residual;
  j["k_min"] = fit.k_range.first;
  j["k_max"] = fit.k_range.second;
  j["n_points"] = fit.n_points;
  return j;
}

json purification_to_json(const MPSPurification& psi) {
  json j;
  j["phys_dims"] = psi.phys_dims;
  j["anc_dims"] = psi.anc_dims;
  j["schmidt_ranks"] = psi.schmidt_ranks;
  json sites = json::array();
  for (const Tensor4& t : psi.sites) {
    json site;
    site["shape"] = {t.d0, t.d1, t.d2, t.d3};
    json vals = json::array();
    for (const cx& v : t.v) vals.push_back({v.real(), v.imag()});
    site["values"] = std::move(vals);
    sites.push_back(std::move(site));
  }
  j["sites"] = std::move(sites);
  return j;
}

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : n_cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) header_ += ',';
    header_ += header[i];
  }
  header_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvWriter::str() const { return header_ + body_; }

void CsvWriter::save(const std::string& path) const {
  save_text(str(), path);
}

void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace purikit

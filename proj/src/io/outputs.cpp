#include "blowup/io/outputs.hpp"

#include "blowup/io/csv.hpp"

namespace blowup::io {

using nlohmann::json;

std::string track_csv(const decomposition::ParameterTrack& track, int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i) h.push_back("xi" + std::to_string(i));
  for (const char* c : {"lambda", "a", "dlambda_dt", "da_dt", "ratio", "ratio_normalized", "converged", "valid",
                        "violates", "violates_normalized"})
    h.push_back(c);
  CsvWriter w(h);
  std::vector<double> row;
  for (const auto& p : track.points) {
    row.assign(1, p.t);
    const auto& xi = p.fit.params.xi;
    for (int i = 0; i < n; ++i) row.push_back(i < static_cast<int>(xi.size()) ? xi[i] : 0.0);
    row.insert(row.end(), {p.lambda(), p.a(), p.dlambda_dt, p.da_dt, p.ratio, p.ratio_normalized,
                           p.fit.converged ? 1.0 : 0.0, p.valid ? 1.0 : 0.0, p.violates ? 1.0 : 0.0,
                           p.violates_normalized ? 1.0 : 0.0});
    w.row(row);
  }
  return w.text();
}

std::string profile_csv(const tangent::SelfSimilarProfile& profile) {
  CsvWriter w({"t", "tau", "y", "w"});
  for (const auto& s : profile.samples)
    for (std::size_t k = 0; k < s.w.size(); ++k) w.row({s.t, s.tau, profile.y[k], s.w[k]});
  return w.text();
}

std::string theta_csv(const std::vector<diagnostics::ThetaSample>& samples, int n) {
  std::vector<std::string> h;
  for (int i = 1; i <= n; ++i) h.push_back("x" + std::to_string(i));
  h.insert(h.end(), {"t", "s", "theta"});
  CsvWriter w(h);
  std::vector<double> row;
  for (const auto& s : samples) {
    row.assign(s.base_point.begin(), s.base_point.end());
    row.resize(n, 0.0);
    row.insert(row.end(), {s.base_time, s.s, s.value});
    w.row(row);
  }
  return w.text();
}

json to_json(const decomposition::DecompositionResult& fit) {
  json j;
  j["xi"] = fit.params.xi;
  j["lambda"] = fit.params.lambda;
  j["a"] = fit.params.a;
  j["residuals"] = fit.residuals;
  j["max_residual"] = fit.max_residual();
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["radial"] = fit.radial;
  j["rcond"] = fit.rcond;
  j["dominance"] = fit.dominance;
  j["certificate"] = fit.certificate;
  j["certified"] = fit.certified;
  j["failure"] = fit.failure;
  json annuli = json::array();
  for (const auto& a : fit.error_field_norms) annuli.push_back({{"inner", a.inner}, {"outer", a.outer}, {"sup", a.sup}});
  j["error_field_norms"] = annuli;
  return j;
}

json to_json(const diagnostics::ClassificationResult& result) {
  json j;
  j["verdict"] = diagnostics::to_string(result.verdict);
  j["bubbles"] = result.bubbles;
  j["theta_limit_est"] = result.theta_limit_est;
  j["confidence_band"] = result.confidence_band;
  j["slope_per_decade"] = result.slope_per_decade;
  j["note"] = result.note;
  return j;
}

}  // namespace blowup::io

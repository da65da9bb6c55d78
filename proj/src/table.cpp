#include "sqcorr/table.hpp"

#include <charconv>
#include <string>

#include "atomic_write.hpp"
#include "sqcorr/config.hpp"
#include "sqcorr/errors.hpp"

namespace sqcorr {

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void append_provenance(std::string& out, const SweepSpec& spec,
                       std::uint64_t master_seed, const SnlCalibration& snl) {
  out += "# sqcorr sweep\n";
  out += "# swept=" + std::string(swept_param_name(spec.swept)) + "\n";
  out += "# master_seed=" + std::to_string(master_seed) + "\n";
  out += "# seeds_per_point=" + std::to_string(spec.seeds_per_point) + "\n";
  out += "# samples_per_run=" + std::to_string(spec.samples_per_run) + "\n";
  out += "# snl_slope=" + format_double(snl.slope) + "\n";
  out += "# snl_en_total=" + format_double(snl.en_total) + "\n";
  for (const auto& [key, value] : scenario_to_key_values(spec.base))
    out += "# base." + key + "=" + value + "\n";
}

}  // namespace

void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& path) {
  std::string out;
  append_provenance(out, result.spec, result.master_seed, result.snl);
  out += std::string(swept_param_name(result.spec.swept)) +
         ",cov,cov_se,var_diff,var_diff_se,s_cov,s_cov_se,s_hd,s_hd_se,witness\n";
  for (const auto& r : result.rows) {
    out += format_double(r.value) + "," + format_double(r.cov) + "," +
           format_double(r.cov_se) + "," + format_double(r.var_diff) + "," +
           format_double(r.var_diff_se) + "," + format_double(r.s_cov) + "," +
           format_double(r.s_cov_se) + "," + format_double(r.s_hd) + "," +
           format_double(r.s_hd_se) + "," + r.witness + "\n";
  }
  if (result.fit) {
    out += "# fitted_exponent=" + format_double(result.fit->exponent) + "±" +
           format_double(result.fit->exponent_se) + "\n";
    out += "# fitted_amplitude=" + format_double(result.fit->amplitude) + "\n";
  } else if (!result.fit_note.empty()) {
    out += "# fit_refused=" + result.fit_note + "\n";
  }
  detail::atomic_write(path, out);
}

void write_sweep_xy(const SweepResult& result,
                    const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : result.rows)
    out += format_double(r.value) + " " + format_double(r.cov) + " " +
           format_double(r.cov_se) + "\n";
  detail::atomic_write(path, out);
}

void write_comparison_csv(const ComparisonReport& report,
                          const std::filesystem::path& path) {
  std::string out;
  append_provenance(out, report.spec, report.master_seed, report.snl);
  out += std::string(swept_param_name(report.spec.swept)) +
         ",cov,cov_se,s_cov,s_cov_se,s_hd,s_hd_se,s_true,s_hd_pred\n";
  for (const auto& r : report.rows) {
    out += format_double(r.value) + "," + format_double(r.cov) + "," +
           format_double(r.cov_se) + "," + format_double(r.s_cov) + "," +
           format_double(r.s_cov_se) + "," + format_double(r.s_hd) + "," +
           format_double(r.s_hd_se) + "," + format_double(r.s_true) + "," +
           format_double(r.s_hd_pred) + "\n";
  }
  detail::atomic_write(path, out);
}

void write_stats_csv(const MeasurementStats& stats,
                     const std::optional<SqueezingEstimate>& estimate,
                     const std::filesystem::path& path) {
  std::string out =
      "n,mean1,mean2,var1,var2,var_diff,cov,se_cov,se_var_diff,coincidence";
  if (estimate) out += ",method,s,s_db,s_se";
  out += "\n";
  out += std::to_string(stats.n) + "," + format_double(stats.mean1) + "," +
         format_double(stats.mean2) + "," + format_double(stats.var1) + "," +
         format_double(stats.var2) + "," + format_double(stats.var_diff) +
         "," + format_double(stats.cov) + "," + format_double(stats.se_cov) +
         "," + format_double(stats.se_var_diff) + "," +
         format_double(coincidence_moment(stats));
  if (estimate)
    out += std::string(",") + method_name(estimate->method) + "," +
           format_double(estimate->s) + "," + format_double(estimate->s_db) +
           "," + format_double(estimate->se);
  out += "\n";
  detail::atomic_write(path, out);
}

}  // namespace sqcorr

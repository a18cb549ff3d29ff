#include <cmath>
#include <fstream>
#include <limits>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include "thetaquench/errors.hpp"
#include "thetaquench/lattice_quench.hpp"
#include "thetaquench/runner.hpp"

namespace tq {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double nan_or(const std::optional<Index>& i, const VectorXd& t, double m) {
  return i ? t(*i) * m : kNaN;
}

// Rows and columns that land on an exact zero of L_k are moved half a step
// (see sample_phase_field); every free table then uses the moved grid.
PhaseField<double> free_field(const RunConfig& c, PipelineOutput& out) {
  GridShifts shifts;
  auto field = sample_phase_field(
      c.k_grid(), c.t_grid(), [&](double kk, double tt) { return mode_amplitude(kk, tt, c.free); }, &shifts);
  const double m = c.free.m;
  for (Index j : shifts.columns)
    out.warnings.push_back("k column " + std::to_string(j) + " passed through a zero of the amplitude; moved to k/m = " +
                           format_double(field.k_grid()(j) / m));
  for (Index i : shifts.rows)
    out.warnings.push_back("time row " + std::to_string(i) + " hit a zero of the amplitude; moved to t*m = " +
                           format_double(field.t_grid()(i) * m));
  return field;
}

std::vector<WindingResult> free_nu(const PhaseField<double>& field) {
  try {
    return nu_series(field);
  } catch (const SingularNodeError& e) {
    throw NumericalError(std::string(e.what()) + " at t_index " + std::to_string(e.t_index) + ", k_index " +
                         std::to_string(e.k_index) + " after the row shift; refine the grid");
  }
}

std::vector<Vortex<double>> free_vortices(const PhaseField<double>& field) {
  try {
    return vortex_chart(field);
  } catch (const SingularNodeError& e) {
    throw NumericalError(std::string(e.what()) + " after the row shift; refine the grid");
  }
}

VectorXd free_rates(const RunConfig& c, const VectorXd& t) {
  VectorXd g(t.size());
  for (Index i = 0; i < t.size(); ++i) g(i) = rate_function_free(t(i), c.free, c.quadrature);
  return g;
}

Table free_series_table(const RunConfig& c, const VectorXd& t, const VectorXd& rate,
                        const std::vector<WindingResult>& nu) {
  Table tab(series_schema());
  const double m = c.free.m;
  for (Index i = 0; i < t.size(); ++i) {
    // The infinite-volume amplitude is not finite; only its rate is reported.
    // In the free theory the three rates coincide identically.
    const double r = rate(i) / m;
    tab.add({t(i) * m, kNaN, kNaN, r, r, r, static_cast<double>(nu[static_cast<std::size_t>(i)].nu)});
  }
  return tab;
}

void note_reliability(const std::vector<WindingResult>& nu, PipelineOutput& out) {
  double worst = 0;
  bool reliable = true;
  for (const auto& w : nu) {
    worst = std::max(worst, w.per_link_max_jump);
    reliable = reliable && w.reliable;
  }
  out.summary["nu_max_link_jump"] = worst;
  if (!reliable) out.warnings.push_back("a link phase jump reached pi; nu may be unresolved on this grid");
}

}  // namespace

PipelineOutput free_phase_pipeline(const RunConfig& c) {
  PipelineOutput out;
  const auto field = free_field(c, out);
  const VectorXd& k = field.k_grid();
  const VectorXd& t = field.t_grid();
  const double m = c.free.m;
  Table phase(phase_schema());
  for (Index i = 0; i < t.size(); ++i)
    for (Index j = 0; j < k.size(); ++j) {
      const bool s = field.singular()(i, j);
      phase.add({k(j) / m, t(i) * m, field.amp()(i, j).real(), field.amp()(i, j).imag(),
                 field.phase()(i, j), s ? 1.0 : 0.0});
    }
  out.summary["singular_nodes"] = static_cast<double>(field.singular().count());
  out.tables.push_back({"phase.csv", "phase", std::move(phase)});

  Table vort(vortex_schema());
  const auto vs = free_vortices(field);
  for (const auto& v : vs) vort.add({v.k / m, v.t * m, static_cast<double>(v.charge)});
  out.summary["vortices"] = static_cast<double>(vs.size());
  out.tables.push_back({"vortices.csv", "vortices", std::move(vort)});
  return out;
}

PipelineOutput free_rate_pipeline(const RunConfig& c) {
  const double m = c.free.m;
  PipelineOutput out;
  const auto field = free_field(c, out);
  const VectorXd& t = field.t_grid();
  const VectorXd rate = free_rates(c, t);
  const auto nu = free_nu(field);
  note_reliability(nu, out);
  out.tables.push_back({"series.csv", "series", free_series_table(c, t, rate, nu)});

  // Secant slopes of the rate on either side of each critical time, with the
  // time-grid step as the secant width.
  Table kinks(kink_schema());
  const VectorXd grid = c.t_grid();
  const double h = grid(1) - grid(0);
  const auto cs = critical_points(c.free, 64);
  for (std::size_t n = 0; n < cs.t_c.size(); ++n) {
    const double tc = cs.t_c[n];
    if (tc + h > grid(grid.size() - 1) || tc - h < 0) break;
    const double g0 = rate_function_free(tc - h, c.free, c.quadrature);
    const double g1 = rate_function_free(tc, c.free, c.quadrature);
    const double g2 = rate_function_free(tc + h, c.free, c.quadrature);
    const double left = (g1 - g0) / h / (m * m);
    const double right = (g2 - g1) / h / (m * m);
    kinks.add({static_cast<double>(n + 1), tc * m, left, right, right - left});
  }
  out.tables.push_back({"kinks.csv", "kinks", std::move(kinks)});
  if (cs.k_c) out.summary["k_c_over_m"] = *cs.k_c / m;
  if (!cs.t_c.empty()) out.summary["t_c1_m"] = cs.t_c[0] * m;
  return out;
}

PipelineOutput free_nu_pipeline(const RunConfig& c) {
  PipelineOutput out;
  const auto field = free_field(c, out);
  const VectorXd& t = field.t_grid();
  const auto nu = free_nu(field);
  const auto vs = free_vortices(field);
  note_reliability(nu, out);
  out.tables.push_back({"series.csv", "series", free_series_table(c, t, free_rates(c, t), nu)});
  const double m = c.free.m;
  Table vort(vortex_schema());
  for (const auto& v : vs) vort.add({v.k / m, v.t * m, static_cast<double>(v.charge)});
  out.tables.push_back({"vortices.csv", "vortices", std::move(vort)});
  out.summary["final_nu"] = nu.empty() ? 0.0 : nu.back().nu;
  return out;
}

PipelineOutput ed_run_pipeline(const RunConfig& c) {
  const VectorXd t = c.t_grid();
  const LatticeQuench q(c.lattice, c.solver);
  const ObservableSeries s = q.run(t);
  const double m = c.lattice.mass;
  PipelineOutput out;

  Table series(series_schema());
  for (Index i = 0; i < t.size(); ++i)
    series.add({t(i) * m, s.loschmidt(i).real(), s.loschmidt(i).imag(), s.rate(i) / m, s.rate_g(i) / m,
                s.correlators.rate_K(i) / m, static_cast<double>(s.nu[static_cast<std::size_t>(i)])});
  out.tables.push_back({"series.csv", "series", std::move(series)});

  const PhaseField<double> field(s.k, t, s.g);
  Table phase(phase_schema());
  for (Index i = 0; i < t.size(); ++i)
    for (Index j = 0; j < s.k.size(); ++j)
      phase.add({s.k(j) / m, t(i) * m, s.g(i, j).real(), s.g(i, j).imag(), field.phase()(i, j),
                 field.singular()(i, j) ? 1.0 : 0.0});
  out.tables.push_back({"phase.csv", "phase", std::move(phase)});

  const VectorXd kr = reduced_momenta(c.lattice);
  const auto& f = s.correlators;
  Table corr(correlator_schema());
  for (Index i = 0; i < t.size(); ++i)
    for (Index j = 0; j < kr.size(); ++j)
      corr.add({kr(j) / m, t(i) * m, f.F_s(i, j), f.F_0(i, j), f.F_1(i, j), f.F_5(i, j)});
  out.tables.push_back({"correlators.csv", "correlators", std::move(corr)});

  out.summary["ground_energy"] = q.initial_state().energy;
  out.summary["ground_gap"] = q.initial_state().gap;
  out.summary["first_max_rate_t_m"] = nan_or(first_local_max(s.rate), t, m);
  out.summary["first_max_rate_g_t_m"] = nan_or(first_local_max(s.rate_g), t, m);
  out.summary["first_max_rate_K_t_m"] = nan_or(first_local_max(s.correlators.rate_K), t, m);
  out.summary["first_nu_t_m"] = nan_or(first_nu_change(s.nu), t, m);
  if (!s.nu_reliable) out.warnings.push_back("a link phase jump reached pi; nu may be unresolved on this grid");
  return out;
}

PipelineOutput ed_scan_pipeline(const RunConfig& c) {
  const VectorXd t = c.t_grid();
  const VectorXd e = c.e_over_m_grid();
  const double m = c.lattice.mass;
  const auto points = scan_phase_diagram(c.lattice, e, t, c.solver, c.threads);
  PipelineOutput out;
  Table scan(scan_schema());
  Table summary(scan_summary_schema());
  for (const auto& pt : points) {
    if (!pt.series) {
      out.errors.push_back("e/m = " + format_double(pt.e_over_m) + ": " + pt.error);
      summary.add({pt.e_over_m, kNaN, kNaN, kNaN, kNaN, 1.0});
      continue;
    }
    const auto& s = *pt.series;
    for (Index i = 0; i < t.size(); ++i)
      scan.add({pt.e_over_m, t(i) * m, static_cast<double>(s.nu[static_cast<std::size_t>(i)]), s.rate(i) / m});
    summary.add({pt.e_over_m, nan_or(first_nu_change(s.nu), t, m), nan_or(first_local_max(s.rate), t, m),
                 nan_or(first_local_max(s.rate_g), t, m), nan_or(first_local_max(s.correlators.rate_K), t, m),
                 0.0});
    if (!s.nu_reliable)
      out.warnings.push_back("e/m = " + format_double(pt.e_over_m) + ": a link phase jump reached pi");
  }
  out.tables.push_back({"scan.csv", "scan", std::move(scan)});
  out.tables.push_back({"scan_summary.csv", "scan_summary", std::move(summary)});
  return out;
}

PipelineOutput run_pipeline(const RunConfig& c) {
  switch (c.mode) {
    case Mode::FreePhase: return free_phase_pipeline(c);
    case Mode::FreeRate: return free_rate_pipeline(c);
    case Mode::FreeNu: return free_nu_pipeline(c);
    case Mode::EdRun: return ed_run_pipeline(c);
    case Mode::EdScan: return ed_scan_pipeline(c);
  }
  throw ValidationError("run_pipeline: unknown mode");
}

namespace {

nlohmann::json conventions(const RunConfig& c) {
  nlohmann::json j;
  j["units"] = "k/m, t*m, e/m, rate/m";
  j["contours"] = "both halves of the (k, t) plane traversed counter-clockwise; nu = n_plus - n_minus";
  j["link_phase"] = "principal branch (-pi, pi]";
  if (is_free(c.mode)) {
    j["gamma"] = c.free.convention == GammaConvention::Standard
                     ? "gamma0 = sigma_z, gamma1 = i sigma_y, gamma5 = sigma_x"
                     : "gamma0 = sigma_x, gamma1 = i sigma_y, gamma5 = -sigma_z";
    j["series_loschmidt"] = "re_L, im_L are nan: the infinite-volume amplitude is not finite";
  } else {
    j["quench"] = "ground state of mass -m evolved with mass +m, neutral sector";
    j["zero_mode"] = "E_n = e (L_n - mean L)";
    j["momenta"] = "cell momenta 2 pi l / (N a), reduced zone; phase table adds the -pi/2a edge copy";
    j["g"] = "sum over both sublattices of <psi+(k, 0) psi(k, t)>";
    j["F"] = "(1/2) <[psi, psibar]>; components F = F_s + F_0 g0 + F_1 g1 + i F_5 g5";
  }
  return j;
}

void write_manifest(const RunConfig& c, const std::string& status, const PipelineOutput* out,
                    const std::vector<std::string>& errors, RunResult& result) {
  nlohmann::json j;
  j["tool"] = "thetaquench";
  j["version"] = THETAQUENCH_VERSION;
  j["mode"] = std::string(mode_name(c.mode));
  j["status"] = status;
  j["parameters"] = c.resolved();
  j["conventions"] = conventions(c);
  j["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                  "." + std::to_string(EIGEN_MINOR_VERSION)},
                    {"boost", std::to_string(BOOST_VERSION / 100000) + "." +
                                  std::to_string(BOOST_VERSION / 100 % 1000)}};
  std::vector<std::string> warnings = c.warnings;
  j["outputs"] = nlohmann::json::array();
  if (out) {
    for (const auto& nt : out->tables)
      j["outputs"].push_back({{"file", nt.file}, {"schema", nt.schema}, {"rows", nt.table.rows.size()},
                              {"columns", nt.table.columns}});
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [k, v] : out->summary) summary[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    j["summary"] = summary;
    warnings.insert(warnings.end(), out->warnings.begin(), out->warnings.end());
  }
  j["warnings"] = warnings;
  j["errors"] = errors;
  const auto path = c.out / "manifest.json";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << j.dump(2) << '\n';
  if (!f) throw NumericalError("cannot write '" + path.string() + "'");
  result.files.push_back("manifest.json");
}

}  // namespace

RunResult run(const RunConfig& c, std::ostream* log) {
  RunResult result;
  for (const auto& w : c.warnings)
    if (log) *log << "warning: " << w << '\n';

  PipelineOutput out;
  std::string failure;
  try {
    out = run_pipeline(c);
  } catch (const ValidationError& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
    return result;
  } catch (const std::exception& e) {
    failure = e.what();
  }

  try {
    std::filesystem::create_directories(c.out);
    if (!failure.empty()) {
      write_manifest(c, "failed", nullptr, {failure}, result);
      result.exit_code = kExitNumerical;
      result.message = failure;
      return result;
    }
    for (const auto& nt : out.tables) {
      write_table(c.out / nt.file, nt.table);
      result.files.push_back(nt.file);
    }
    write_manifest(c, out.errors.empty() ? "ok" : "partial", &out, out.errors, result);
  } catch (const std::exception& e) {
    result.exit_code = kExitNumerical;
    result.message = e.what();
    return result;
  }
  if (log)
    for (const auto& w : out.warnings) *log << "warning: " << w << '\n';
  if (!out.errors.empty()) {
    result.exit_code = kExitNumerical;
    result.message = out.errors.front();
  }
  return result;
}

}  // namespace tq

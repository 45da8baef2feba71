#include "lcone/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lcone {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& contents) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

json complex_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXd& m, bool clip) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(clip ? clip_roundoff(m(i, j)) : m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json params_json(const EnvelopeParams& p) {
  json j;
  j["chi"] = p.chi;
  j["C"] = p.C;
  j["D"] = p.D;
  j["Delta"] = p.Delta;
  j["tau_max"] = p.tau_max;
  j["v0"] = p.v0;
  j["v"] = p.v;
  return j;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double clip_roundoff(double v) { return (v < 0.0 && v >= -1e-10) ? 0.0 : v; }

void write_trace_csv(const std::string& path, const SimulationTrace& trace,
                     const Eigen::MatrixXd* gamma, const Eigen::MatrixXd* analytic_bound) {
  const Eigen::Index steps = trace.alpha.rows();
  const Eigen::Index sites = trace.alpha.cols();
  std::string out = "time,site,alpha";
  if (gamma) out += ",gamma";
  if (analytic_bound) out += ",analytic_bound";
  const bool per_species = trace.alpha_species.size() > 1;
  if (per_species) {
    for (std::size_t s = 0; s < trace.alpha_species.size(); ++s) {
      out += ",alpha_s" + std::to_string(s);
    }
  }
  for (const auto& [p, values] : trace.moments) {
    (void)values;
    out += ",moment_p" + std::to_string(p);
  }
  out += "\n";
  for (Eigen::Index t = 0; t < steps; ++t) {
    const std::string time_str = format_g17(trace.times[static_cast<std::size_t>(t)]);
    for (Eigen::Index j = 0; j < sites; ++j) {
      out += time_str;
      out += ",";
      out += std::to_string(j);
      out += ",";
      out += format_g17(clip_roundoff(trace.alpha(t, j)));
      if (gamma) {
        out += ",";
        out += format_g17(clip_roundoff((*gamma)(t, j)));
      }
      if (analytic_bound) {
        out += ",";
        out += format_g17((*analytic_bound)(t, j));
      }
      if (per_species) {
        for (const auto& species_alpha : trace.alpha_species) {
          out += ",";
          out += format_g17(clip_roundoff(species_alpha(t, j)));
        }
      }
      for (const auto& [p, values] : trace.moments) {
        (void)p;
        out += ",";
        out += format_g17(clip_roundoff(values(t, j)));
      }
      out += "\n";
    }
  }
  write_file(path, out);
}

void write_trace_json(const std::string& path, const SimulationTrace& trace) {
  json j;
  j["times"] = trace.times;
  j["alpha"] = matrix_json(trace.alpha, true);
  if (trace.alpha_species.size() > 1) {
    json per_species = json::array();
    for (const auto& m : trace.alpha_species) per_species.push_back(matrix_json(m, true));
    j["alpha_species"] = std::move(per_species);
  }
  if (!trace.moments.empty()) {
    json moments;
    for (const auto& [p, values] : trace.moments) {
      moments[std::to_string(p)] = matrix_json(values, true);
    }
    j["moments"] = std::move(moments);
  }
  j["flow"] = matrix_json(trace.flow, false);
  j["norm_or_trace"] = vector_json(trace.norm_or_trace);
  j["energy"] = vector_json(trace.energy);
  j["total_number"] = vector_json(trace.total_number);
  if (trace.min_eigenvalue.size() > 0) j["min_eigenvalue"] = vector_json(trace.min_eigenvalue);
  if (!trace.observables.empty()) {
    json obs;
    for (const auto& o : trace.observables) {
      json values = json::array();
      for (Eigen::Index t = 0; t < o.values.size(); ++t) values.push_back(complex_json(o.values[t]));
      obs[o.observable.name] = std::move(values);
    }
    j["observables"] = std::move(obs);
  }
  if (!trace.correlators.empty()) {
    json cors;
    for (const auto& c : trace.correlators) {
      json entry;
      json values = json::array();
      for (Eigen::Index t = 0; t < c.values.size(); ++t) values.push_back(complex_json(c.values[t]));
      entry["values"] = std::move(values);
      entry["cs_bound"] = vector_json(c.cs_bound);
      cors[c.observable.name] = std::move(entry);
    }
    j["correlators"] = std::move(cors);
  }
  j["lindblad"] = trace.lindblad;
  j["loss_rate"] = trace.loss_rate;
  j["integrator_tolerance"] = trace.integrator_tolerance;
  write_file(path, j.dump(2) + "\n");
}

void write_envelope_csv(const std::string& path, const std::vector<double>& times,
                        const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& analytic_bound) {
  std::string out = "time,site,gamma,analytic_bound\n";
  for (Eigen::Index t = 0; t < gamma.rows(); ++t) {
    const std::string time_str = format_g17(times[static_cast<std::size_t>(t)]);
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
      out += time_str;
      out += ",";
      out += std::to_string(j);
      out += ",";
      out += format_g17(clip_roundoff(gamma(t, j)));
      out += ",";
      out += format_g17(analytic_bound(t, j));
      out += "\n";
    }
  }
  write_file(path, out);
}

Eigen::MatrixXd analytic_bound_matrix(const std::vector<double>& times,
                                      const std::vector<double>& distances,
                                      const EnvelopeParams& params, double n0) {
  Eigen::MatrixXd bound(static_cast<Eigen::Index>(times.size()),
                        static_cast<Eigen::Index>(distances.size()));
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t j = 0; j < distances.size(); ++j) {
      bound(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          analytic_density_bound(params, n0, distances[j], times[t]);
    }
  }
  return bound;
}

void write_constants_json(const std::string& path, const EnvelopeParams& params) {
  write_file(path, params_json(params).dump(2) + "\n");
}

void write_report_json(const std::string& path, const VerificationReport& report) {
  json j;
  j["constants"] = params_json(report.params);
  j["n0"] = report.n0;
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    entry["applicable"] = c.applicable;
    entry["margin"] = c.margin;
    entry["tolerance"] = c.tolerance;
    entry["worst_time"] = c.worst_time;
    entry["worst_site"] = c.worst_site;
    entry["note"] = c.note;
    checks.push_back(std::move(entry));
  }
  j["checks"] = std::move(checks);
  json vel;
  vel["conclusive"] = report.velocity.conclusive;
  vel["v_emp"] = report.velocity.v_emp;
  vel["fit_residual"] = report.velocity.fit_residual;
  vel["points"] = report.velocity.points;
  vel["note"] = report.velocity.note;
  j["velocity"] = std::move(vel);
  json loose;
  loose["alpha_over_gamma"] = report.alpha_over_gamma;
  loose["alpha_over_cone"] = report.alpha_over_cone;
  loose["v_emp_over_v"] = report.v_emp_over_v;
  j["looseness"] = std::move(loose);
  j["all_passed"] = report.all_passed();
  write_file(path, j.dump(2) + "\n");
}

void write_report_txt(const std::string& path, const VerificationReport& report) {
  std::string out;
  char line[512];
  const auto& p = report.params;
  std::snprintf(line, sizeof(line),
                "constants: chi=%.6f C=%.6f Delta=%g D=%g tau_max=%g v0=%.6f v=%.6f\n", p.chi, p.C,
                p.Delta, p.D, p.tau_max, p.v0, p.v);
  out += line;
  std::snprintf(line, sizeof(line), "initial particle number N0 = %s\n\n",
                format_g17(report.n0).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-34s %-6s %-13s %-13s %s\n", "check", "status", "margin",
                "tolerance", "note");
  out += line;
  out += std::string(34, '-') + " " + std::string(6, '-') + " " + std::string(13, '-') + " " +
         std::string(13, '-') + " ----\n";
  for (const auto& c : report.checks) {
    const char* status = !c.applicable ? "n/a" : (c.passed ? "pass" : "FAIL");
    std::snprintf(line, sizeof(line), "%-34s %-6s %-13.4e %-13.4e %s\n", c.name.c_str(), status,
                  c.margin, c.tolerance, c.note.c_str());
    out += line;
  }
  out += "\n";
  if (report.velocity.conclusive) {
    std::snprintf(line, sizeof(line),
                  "velocity: v_emp=%.6f (bound v=%.6f), fit residual %.3e, %d arrival points\n",
                  report.velocity.v_emp, p.v, report.velocity.fit_residual,
                  report.velocity.points);
  } else {
    std::snprintf(line, sizeof(line), "velocity: inconclusive (%s)\n",
                  report.velocity.note.c_str());
  }
  out += line;
  std::snprintf(line, sizeof(line),
                "looseness (reported, not gated): max alpha/gamma=%.3e  max alpha/cone=%.3e  "
                "v_emp/v=%.3e\n",
                report.alpha_over_gamma, report.alpha_over_cone, report.v_emp_over_v);
  out += line;
  out += std::string("overall: ") + (report.all_passed() ? "PASS" : "FAIL") + "\n";
  write_file(path, out);
}

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<SweepRow>& rows) {
  std::string out = parameter + ",all_passed,v_bound,v_emp,alpha_over_gamma,alpha_over_cone\n";
  for (const auto& r : rows) {
    out += format_g17(r.value);
    out += ",";
    out += r.passed ? "1" : "0";
    out += ",";
    out += format_g17(r.v_bound);
    out += ",";
    out += format_g17(r.v_emp);
    out += ",";
    out += format_g17(r.alpha_over_gamma);
    out += ",";
    out += format_g17(r.alpha_over_cone);
    out += "\n";
  }
  write_file(path, out);
}

}  // namespace lcone

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcone/envelope.hpp"
#include "lcone/evolve.hpp"
#include "lcone/verify.hpp"

namespace lcone {

/// 17-significant-digit round-trip formatting shared by every writer, so
/// identical runs produce identical bytes.
std::string format_g17(double v);

/// Roundoff negatives in [-1e-10, 0) print as 0; larger violations are left
/// visible. Applied to density-like columns only, never to internal state.
double clip_roundoff(double v);

/// Columns: time,site,alpha[,gamma,analytic_bound][,alpha_s{s}...][,moment_p{p}...],
/// rows sorted by (time, site). gamma/analytic_bound join in when provided.
void write_trace_csv(const std::string& path, const SimulationTrace& trace,
                     const Eigen::MatrixXd* gamma = nullptr,
                     const Eigen::MatrixXd* analytic_bound = nullptr);

void write_trace_json(const std::string& path, const SimulationTrace& trace);

/// Columns: time,site,gamma,analytic_bound in the trace layout, so the two
/// files join by (time, site).
void write_envelope_csv(const std::string& path, const std::vector<double>& times,
                        const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& analytic_bound);

/// bound(t, j) = C n0 exp(v times[t] - distances[j])
Eigen::MatrixXd analytic_bound_matrix(const std::vector<double>& times,
                                      const std::vector<double>& distances,
                                      const EnvelopeParams& params, double n0);

void write_constants_json(const std::string& path, const EnvelopeParams& params);
void write_report_json(const std::string& path, const VerificationReport& report);
void write_report_txt(const std::string& path, const VerificationReport& report);

struct SweepRow {
  double value = 0.0;
  bool passed = false;
  double v_bound = 0.0;
  double v_emp = 0.0;  // 0 when the velocity fit was inconclusive
  double alpha_over_gamma = 0.0;
  double alpha_over_cone = 0.0;
};

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<SweepRow>& rows);

}  // namespace lcone

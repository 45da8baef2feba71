// Acceptance gate: one line per criterion, exit 0 iff all pass.
// argv[1] is the CLI binary, used by the determinism criterion.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lcone/envelope.hpp"
#include "lcone/evolve.hpp"
#include "lcone/hamiltonian.hpp"
#include "lcone/operators.hpp"
#include "lcone/verify.hpp"

using namespace lcone;
namespace fs = std::filesystem;

namespace {

const std::complex<double> kI(0.0, 1.0);

int g_failures = 0;

void report(int id, const std::string& name, bool passed, const std::string& detail,
            double seconds) {
  if (!passed) ++g_failures;
  std::printf("%s  %2d  %-28s  %8.2f s  %s\n", passed ? "PASS" : "FAIL", id, name.c_str(), seconds,
              detail.c_str());
  std::fflush(stdout);
}

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  bool passed = false;
  std::string detail;
  try {
    passed = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, name, passed, detail, seconds);
}

ModelSpec chain_model(int sites, Statistics stat, double tau, double u, double loss = 0.0) {
  ModelSpec spec;
  spec.lattice = std::make_shared<Lattice>(sites == 1 ? Lattice::from_edges(1, {})
                                                      : Lattice::chain(sites, false));
  spec.species = {SpeciesSpec{stat, 0}};
  spec.tau = TauSchedule::constant(tau);
  spec.U = {u};
  spec.mu = {0.0};
  spec.loss_rate = loss;
  return spec;
}

InitialStateSpec occupy(std::vector<int> region, std::vector<int> counts) {
  InitialStateSpec init;
  init.region = std::move(region);
  InitialStateSpec::Component comp;
  comp.occupations = {std::move(counts)};
  init.components.push_back(comp);
  return init;
}

std::vector<double> linspace(double t_max, int points) {
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
  return t;
}

ExperimentConfig experiment(ModelSpec model, InitialStateSpec init, double t_max, int points) {
  ExperimentConfig cfg;
  cfg.model = std::move(model);
  cfg.initial = std::move(init);
  cfg.times = linspace(t_max, points);
  cfg.dissipative = cfg.model.loss_rate > 0.0;
  return cfg;
}

const CheckResult* find_check(const VerificationReport& rep, const std::string& name) {
  for (const CheckResult& c : rep.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- criterion 1 -----------------------------------------------------------

bool crit_constants(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  double chi = solve_chi();
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  double residual = std::abs(chi * std::log(chi) - chi - 1.0);
  double c = 2.0 * chi * chi / (chi - 1.0);
  bool rounds = std::round(chi * 100.0) / 100.0 == 3.59;
  bool ok = residual < 1e-12 && rounds && c > 9.9 && c < 10.1 && ms < 1.0;
  detail = "chi=" + fmt(chi) + " residual=" + fmt(residual) + " C=" + fmt(c) +
           " solve=" + fmt(ms) + "ms";
  return ok;
}

// ---- criterion 2 -----------------------------------------------------------

bool crit_rabi(std::string& detail) {
  ExperimentConfig cfg =
      experiment(chain_model(2, Statistics::boson, 1.0, 0.0), occupy({0}, {1}), 4.0, 4001);
  auto [trace, rep] = run_experiment(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    double s = std::sin(cfg.times[i]);
    worst = std::max(worst,
                     std::abs(trace.alpha(static_cast<Eigen::Index>(i), 1) - s * s));
  }
  const CheckResult* diff = find_check(rep, "diff_inequality");
  bool ok = worst < 1e-8 && diff && diff->applicable && diff->margin <= 1e-6;
  detail = "max|alpha_1 - sin^2|=" + fmt(worst) +
           " ineq_margin=" + (diff ? fmt(diff->margin) : "missing");
  return ok;
}

// ---- criterion 3 -----------------------------------------------------------

bool crit_single_particle(std::string& detail) {
  double worst = 0.0;
  const double tau = 0.8;
  for (int sites = 9; sites <= 13; ++sites) {
    ModelSpec spec = chain_model(sites, Statistics::boson, tau, 7.0);  // U idle at N = 1
    int start = sites / 2;
    SimulationTrace trace =
        evolve_unitary(spec, make_pure_state(spec, occupy({start}, {1})), linspace(3.0, 50));
    Eigen::MatrixXcd h1 =
        (-tau * spec.lattice->adjacency_dense()).cast<std::complex<double>>();
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      Eigen::MatrixXcd u = (-kI * trace.times[i] * h1).exp();
      for (int j = 0; j < sites; ++j) {
        worst = std::max(worst, std::abs(trace.alpha(static_cast<Eigen::Index>(i), j) -
                                         std::norm(u(j, start))));
      }
    }
  }
  detail = "max density deviation=" + fmt(worst) + " over chains 9..13";
  return worst < 1e-9;
}

// ---- criterion 4 -----------------------------------------------------------

bool crit_interacting_dominance(std::string& detail) {
  std::ostringstream note;
  bool ok = true;
  for (double u : {0.0, 2.0, 8.0}) {
    ExperimentConfig cfg = experiment(chain_model(11, Statistics::boson, 1.0, u),
                                      occupy({0, 1}, {1, 1}), 1.5, 61);
    auto [trace, rep] = run_experiment(cfg);
    const CheckResult* ag = find_check(rep, "alpha_le_gamma");
    const CheckResult* ac = find_check(rep, "alpha_le_cone");
    double v_expected = rep.params.chi + 2.0;
    bool this_ok = ag && ac && ag->margin <= 1e-8 && ac->margin <= 1e-8 &&
                   std::abs(rep.params.v - v_expected) < 1e-12;
    ok = ok && this_ok;
    note << "U=" << fmt(u) << ": gamma_margin=" << fmt(ag ? ag->margin : 1.0)
         << " cone_margin=" << fmt(ac ? ac->margin : 1.0) << "  ";
  }
  detail = note.str();
  return ok;
}

// ---- criterion 5 -----------------------------------------------------------

bool crit_certificate(std::string& detail) {
  double worst = 0.0;
  for (double tau : {0.7, 1.0}) {
    for (double t : {0.1, 0.5, 1.0}) {
      worst = std::max(worst, elementwise_expm_certificate(Lattice::chain(20, false), tau, t));
      worst = std::max(worst, elementwise_expm_certificate(Lattice::grid(8, 8, false), tau, t));
    }
  }
  detail = "max ratio=" + fmt(worst);
  return worst <= 1.0;
}

// ---- criterion 6 -----------------------------------------------------------

bool crit_moments(std::string& detail) {
  ExperimentConfig soft = experiment(chain_model(11, Statistics::boson, 1.0, 2.0),
                                     occupy({0, 1}, {1, 1}), 1.5, 61);
  soft.request.moments = {2};
  auto [strace, srep] = run_experiment(soft);
  const CheckResult* sm = find_check(srep, "moment_p2_le_bound");

  ExperimentConfig hard = experiment(chain_model(11, Statistics::hardcore, 1.0, 0.0),
                                     occupy({0, 1}, {1, 1}), 1.5, 61);
  hard.request.moments = {2};
  auto [htrace, hrep] = run_experiment(hard);
  const CheckResult* hm = find_check(hrep, "moment_p2_le_bound");

  bool ok = sm && sm->margin <= 1e-8 && hm && hm->margin <= 1e-8 &&
            hm->note.find("N0") != std::string::npos;
  detail = std::string("boson margin=") + (sm ? fmt(sm->margin) : "missing") +
           " hardcore(N0) margin=" + (hm ? fmt(hm->margin) : "missing");
  return ok;
}

// ---- criterion 7 -----------------------------------------------------------

bool crit_dissipative(std::string& detail) {
  // isolated mode, H = 0: the displayed master equation gives alpha(t) = n0 e^{-2 lambda t}
  ModelSpec mode = chain_model(1, Statistics::boson, 0.0, 0.0, 0.5);
  SimulationTrace decay =
      evolve_lindblad(mode, make_density_state(mode, occupy({0}, {3})), linspace(2.0, 81));
  double worst = 0.0;
  for (std::size_t i = 0; i < decay.times.size(); ++i) {
    worst = std::max(worst, std::abs(decay.alpha(static_cast<Eigen::Index>(i), 0) -
                                     3.0 * std::exp(-2.0 * 0.5 * decay.times[i])));
  }

  ExperimentConfig cfg =
      experiment(chain_model(5, Statistics::boson, 1.0, 0.0, 0.2), occupy({0}, {1}), 1.5, 31);
  auto [trace, rep] = run_experiment(cfg);
  const CheckResult* mono = find_check(rep, "number_monotone");
  bool dominance = true;
  for (const char* name : {"alpha_le_gamma", "gamma_le_cone", "alpha_le_cone"}) {
    const CheckResult* c = find_check(rep, name);
    dominance = dominance && c && c->passed;
  }
  bool ok = worst < 1e-8 && mono && mono->passed && dominance;
  detail = "max|alpha - n0 e^{-2 lambda t}|=" + fmt(worst) +
           " lossy chain dominance=" + (dominance ? "pass" : "fail");
  return ok;
}

// ---- criterion 8 -----------------------------------------------------------

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXd jw_annihilation(int sites, int site) {
  Eigen::MatrixXd a(2, 2), z(2, 2), id(2, 2);
  a << 0, 1, 0, 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int k = 0; k < sites; ++k) out = kron(out, k < site ? z : (k == site ? a : id));
  return out;
}

bool crit_statistics(std::string& detail) {
  auto times = linspace(2.0, 41);
  ModelSpec boson = chain_model(9, Statistics::boson, 1.0, 0.0);
  ModelSpec fermion = chain_model(9, Statistics::fermion, 1.0, 0.0);
  SimulationTrace bt = evolve_unitary(boson, make_pure_state(boson, occupy({4}, {1})), times);
  SimulationTrace ft = evolve_unitary(fermion, make_pure_state(fermion, occupy({4}, {1})), times);
  double diverge = (bt.alpha - ft.alpha).cwiseAbs().maxCoeff();

  ExperimentConfig cfg = experiment(chain_model(9, Statistics::fermion, 1.0, 0.0),
                                    occupy({0, 1}, {1, 1}), 1.5, 31);
  auto [trace, rep] = run_experiment(cfg);
  bool dominance = true;
  for (const char* name : {"alpha_le_gamma", "gamma_le_cone", "alpha_le_cone"}) {
    const CheckResult* c = find_check(rep, name);
    dominance = dominance && c && c->passed;
  }

  // hop matrices against the full 2^L Jordan-Wigner representation
  double jw_worst = 0.0;
  for (int sites = 2; sites <= 4; ++sites) {
    for (int from = 0; from < sites; ++from) {
      for (int to = 0; to < sites; ++to) {
        Eigen::MatrixXd full =
            jw_annihilation(sites, to).transpose() * jw_annihilation(sites, from);
        for (long n = 0; n <= sites; ++n) {
          SectorBasis basis(sites, {SpeciesSpec{Statistics::fermion, 0}}, {n});
          Eigen::MatrixXd block = Eigen::MatrixXd(hop_matrix(basis, 0, from, to));
          for (std::size_t col = 0; col < basis.dim(); ++col) {
            std::vector<std::vector<int>> col_occ = basis.unrank(col);
            std::size_t fc = 0;
            for (int v : col_occ[0]) fc = 2 * fc + static_cast<std::size_t>(v);
            for (std::size_t row = 0; row < basis.dim(); ++row) {
              std::vector<std::vector<int>> row_occ = basis.unrank(row);
              std::size_t fr = 0;
              for (int v : row_occ[0]) fr = 2 * fr + static_cast<std::size_t>(v);
              jw_worst = std::max(
                  jw_worst,
                  std::abs(block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) -
                           full(static_cast<Eigen::Index>(fr), static_cast<Eigen::Index>(fc))));
            }
          }
        }
      }
    }
  }

  bool ok = diverge < 1e-10 && dominance && jw_worst < 1e-13;
  detail = "free boson/fermion divergence=" + fmt(diverge) + " jw_oracle_diff=" + fmt(jw_worst) +
           " N=2 dominance=" + (dominance ? "pass" : "fail");
  return ok;
}

// ---- criterion 9 -----------------------------------------------------------

double empirical_velocity(double tau, std::string& note) {
  ModelSpec spec = chain_model(25, Statistics::boson, tau, 0.0);
  SimulationTrace trace =
      evolve_unitary(spec, make_pure_state(spec, occupy({0}, {1})), linspace(9.0, 1801));
  VelocityEstimate est = estimate_velocity(trace, *spec.lattice, {0}, 1e-4);
  if (!est.conclusive) {
    note += "inconclusive(" + est.note + ") ";
    return 0.0;
  }
  return est.v_emp;
}

bool crit_velocity(std::string& detail) {
  std::string note;
  double v1 = empirical_velocity(1.0, note);
  double v2 = empirical_velocity(2.0, note);
  EnvelopeParams params = make_params(Lattice::chain(25, false), 1.0);
  double ratio = v1 > 0.0 ? v2 / v1 : 0.0;
  bool ok = v1 >= 1.6 && v1 <= 2.4 && v1 <= params.v && std::abs(ratio - 2.0) <= 0.3;
  detail = note + "v_emp(tau=1)=" + fmt(v1) + " bound v=" + fmt(params.v) +
           " doubling ratio=" + fmt(ratio);
  return ok;
}

// ---- criterion 10 ----------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool crit_determinism(std::string& detail, const std::string& binary) {
  if (binary.empty()) {
    detail = "CLI binary path missing (argv[1])";
    return false;
  }
  fs::path dir = fs::temp_directory_path() / "lcone_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path cfg = dir / "run.json";
  {
    std::ofstream out(cfg);
    out << R"json({
  "lattice": {"kind": "chain", "length": 5},
  "model": {"tau": 1.0, "U": 2.0},
  "initial": {"region": [0, 1], "occupations": [1, 1]},
  "time": {"t_max": 1.5, "points": 31},
  "checks": {
    "moments": [2],
    "observables": [
      {"name": "pair", "site": 2, "terms": [{"p": 2, "q": 2, "coeff": 1.0}]}
    ],
    "correlators": [
      {"name": "edge", "left": {"name": "l", "site": 0, "terms": [{"p": 1, "q": 0, "coeff": 1.0}]},
       "right": {"name": "r", "site": 4, "terms": [{"p": 0, "q": 1, "coeff": 1.0}]}}
    ]
  }
})json";
  }
  auto run = [&](const std::string& out_dir) {
    std::string cmd = "\"" + binary + "\" verify \"" + cfg.string() + "\" --out-dir \"" + out_dir +
                      "\" >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  fs::path a = dir / "a";
  fs::path b = dir / "b";
  int rc1 = run(a.string());
  int rc2 = run(b.string());
  if (rc1 != 0 || rc2 != 0) {
    detail = "verify exited nonzero: " + std::to_string(rc1) + ", " + std::to_string(rc2);
    return false;
  }
  bool identical = true;
  std::string mismatched;
  for (const char* name :
       {"trace.csv", "trace.json", "envelope.csv", "constants.json", "report.json", "report.txt"}) {
    if (slurp(a / name) != slurp(b / name)) {
      identical = false;
      mismatched += std::string(name) + " ";
    }
  }
  detail = identical ? "all artifacts byte-identical across reruns"
                     : "mismatched: " + mismatched;
  return identical;
}

}  // namespace

int main(int argc, char** argv) {
  std::string binary = argc > 1 ? argv[1] : "";
  std::printf("acceptance gate\n");

  criterion(1, "constants reproduction", crit_constants);
  criterion(2, "closed-form oscillator", crit_rabi);
  criterion(3, "single-particle oracle", crit_single_particle);
  criterion(4, "interacting dominance", crit_interacting_dominance);
  criterion(5, "elementwise certificate", crit_certificate);
  criterion(6, "higher moments", crit_moments);
  criterion(7, "dissipative decay", crit_dissipative);
  criterion(8, "statistics independence", crit_statistics);
  criterion(9, "empirical velocity", crit_velocity);
  criterion(10, "determinism", [&](std::string& d) { return crit_determinism(d, binary); });

  if (g_failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}

#include "lcone/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lcone/errors.hpp"

namespace lcone {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  expect_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path, "missing required key '" + key + "'");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::complex<double> as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(path, "expected a number or a [re, im] pair");
}

std::shared_ptr<const Lattice> parse_lattice_inner(const json& j, const std::string& path,
                                                   const std::string& kind);

std::shared_ptr<const Lattice> parse_lattice(const json& j, const std::string& path) {
  std::string kind = as_string(require(j, path, "kind"), path + ".kind");
  try {
    return parse_lattice_inner(j, path, kind);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::shared_ptr<const Lattice> parse_lattice_inner(const json& j, const std::string& path,
                                                   const std::string& kind) {
  if (kind == "chain") {
    expect_keys(j, path, {"kind", "length", "periodic"});
    long length = as_integer(require(j, path, "length"), path + ".length");
    if (length < 2) fail(path + ".length", "chain needs at least 2 sites");
    bool periodic = j.contains("periodic") && as_bool(j.at("periodic"), path + ".periodic");
    return std::make_shared<Lattice>(Lattice::chain(static_cast<int>(length), periodic));
  }
  if (kind == "grid") {
    expect_keys(j, path, {"kind", "width", "height", "periodic"});
    long w = as_integer(require(j, path, "width"), path + ".width");
    long h = as_integer(require(j, path, "height"), path + ".height");
    if (w < 1 || h < 1 || w * h < 2) fail(path, "grid needs at least 2 sites");
    bool periodic = j.contains("periodic") && as_bool(j.at("periodic"), path + ".periodic");
    return std::make_shared<Lattice>(
        Lattice::grid(static_cast<int>(w), static_cast<int>(h), periodic));
  }
  if (kind == "edges") {
    expect_keys(j, path, {"kind", "num_sites", "edges"});
    long n = as_integer(require(j, path, "num_sites"), path + ".num_sites");
    if (n < 1) fail(path + ".num_sites", "needs at least 1 site");
    const json& edges_json = require(j, path, "edges");
    if (!edges_json.is_array()) fail(path + ".edges", "expected an array");
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < edges_json.size(); ++i) {
      std::string epath = path + ".edges[" + std::to_string(i) + "]";
      const json& e = edges_json[i];
      if (!e.is_array() || e.size() != 2) fail(epath, "expected a [site, site] pair");
      edges.emplace_back(static_cast<int>(as_integer(e[0], epath)),
                         static_cast<int>(as_integer(e[1], epath)));
    }
    return std::make_shared<Lattice>(Lattice::from_edges(static_cast<int>(n), edges));
  }
  fail(path + ".kind", "expected \"chain\", \"grid\" or \"edges\"");
}

std::vector<SpeciesSpec> parse_species(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  std::vector<SpeciesSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string spath = path + "[" + std::to_string(i) + "]";
    expect_keys(j[i], spath, {"statistics", "n_max"});
    SpeciesSpec sp;
    std::string stat = as_string(require(j[i], spath, "statistics"), spath + ".statistics");
    if (stat == "boson") {
      sp.statistics = Statistics::boson;
    } else if (stat == "fermion") {
      sp.statistics = Statistics::fermion;
    } else if (stat == "hardcore") {
      sp.statistics = Statistics::hardcore;
    } else {
      fail(spath + ".statistics", "expected \"boson\", \"fermion\" or \"hardcore\"");
    }
    if (j[i].contains("n_max")) {
      long m = as_integer(j[i].at("n_max"), spath + ".n_max");
      if (m < 0) fail(spath + ".n_max", "must be nonnegative (0 = uncapped)");
      if (sp.statistics != Statistics::boson && m > 1) {
        fail(spath + ".n_max", "fermion/hardcore occupations are capped at 1");
      }
      sp.n_max = static_cast<int>(m);
    }
    out.push_back(sp);
  }
  return out;
}

std::vector<double> parse_per_species(const json& j, const std::string& path, std::size_t count) {
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(count, j.get<double>());
    return out;
  }
  if (!j.is_array()) fail(path, "expected a number or an array");
  if (j.size() != count) fail(path, "expected one entry per species");
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

TauSchedule parse_tau(const json& j, const std::string& path) {
  if (j.is_number()) return TauSchedule::constant(j.get<double>());
  expect_keys(j, path, {"times", "values"});
  const json& times = require(j, path, "times");
  const json& values = require(j, path, "values");
  if (!times.is_array() || !values.is_array()) fail(path, "times and values must be arrays");
  std::vector<double> t, v;
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.push_back(as_number(times[i], path + ".times[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    v.push_back(as_number(values[i], path + ".values[" + std::to_string(i) + "]"));
  }
  try {
    return TauSchedule::piecewise(std::move(t), std::move(v));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

ModelSpec parse_model(const json& j, const std::string& path,
                      std::shared_ptr<const Lattice> lattice) {
  expect_keys(j, path,
              {"species", "tau", "U", "mu", "on_site_terms", "pair_terms", "loss_rate"});
  ModelSpec spec;
  spec.lattice = std::move(lattice);
  spec.species = j.contains("species") ? parse_species(j.at("species"), path + ".species")
                                       : std::vector<SpeciesSpec>{SpeciesSpec{}};
  spec.tau = parse_tau(require(j, path, "tau"), path + ".tau");
  spec.U = j.contains("U") ? parse_per_species(j.at("U"), path + ".U", spec.species.size())
                           : std::vector<double>(spec.species.size(), 0.0);
  spec.mu = j.contains("mu") ? parse_per_species(j.at("mu"), path + ".mu", spec.species.size())
                             : std::vector<double>(spec.species.size(), 0.0);
  if (j.contains("on_site_terms")) {
    const json& terms = j.at("on_site_terms");
    if (!terms.is_array()) fail(path + ".on_site_terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      std::string tpath = path + ".on_site_terms[" + std::to_string(i) + "]";
      expect_keys(terms[i], tpath, {"site", "exponents", "coeff"});
      OnSiteTerm term;
      term.site = static_cast<int>(as_integer(require(terms[i], tpath, "site"), tpath + ".site"));
      const json& exps = require(terms[i], tpath, "exponents");
      if (!exps.is_array()) fail(tpath + ".exponents", "expected an array");
      for (std::size_t e = 0; e < exps.size(); ++e) {
        long v = as_integer(exps[e], tpath + ".exponents[" + std::to_string(e) + "]");
        if (v < 0) fail(tpath + ".exponents", "must be nonnegative");
        term.exponents.push_back(static_cast<int>(v));
      }
      term.coeff = as_number(require(terms[i], tpath, "coeff"), tpath + ".coeff");
      spec.on_site_terms.push_back(std::move(term));
    }
  }
  if (j.contains("pair_terms")) {
    const json& terms = j.at("pair_terms");
    if (!terms.is_array()) fail(path + ".pair_terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      std::string tpath = path + ".pair_terms[" + std::to_string(i) + "]";
      expect_keys(terms[i], tpath, {"sites", "species", "coeff"});
      PairTerm term;
      const json& sites = require(terms[i], tpath, "sites");
      if (!sites.is_array() || sites.size() != 2) fail(tpath + ".sites", "expected [j, k]");
      term.site_j = static_cast<int>(as_integer(sites[0], tpath + ".sites"));
      term.site_k = static_cast<int>(as_integer(sites[1], tpath + ".sites"));
      if (terms[i].contains("species")) {
        const json& sp = terms[i].at("species");
        if (!sp.is_array() || sp.size() != 2) fail(tpath + ".species", "expected [s, s']");
        term.species_j = static_cast<std::size_t>(as_integer(sp[0], tpath + ".species"));
        term.species_k = static_cast<std::size_t>(as_integer(sp[1], tpath + ".species"));
      }
      term.coeff = as_number(require(terms[i], tpath, "coeff"), tpath + ".coeff");
      spec.pair_terms.push_back(term);
    }
  }
  if (j.contains("loss_rate")) {
    spec.loss_rate = as_number(j.at("loss_rate"), path + ".loss_rate");
    if (spec.loss_rate < 0.0) fail(path + ".loss_rate", "must be nonnegative");
  }
  return spec;
}

std::vector<std::vector<int>> parse_occupations(const json& j, const std::string& path,
                                                std::size_t species_count,
                                                std::size_t region_size) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  std::vector<std::vector<int>> occ;
  if (j[0].is_number()) {
    // flat list, only valid for a single species
    if (species_count != 1) fail(path, "flat occupation list needs exactly one species");
    std::vector<int> row;
    for (std::size_t i = 0; i < j.size(); ++i) {
      long v = as_integer(j[i], path + "[" + std::to_string(i) + "]");
      if (v < 0) fail(path, "occupations must be nonnegative");
      row.push_back(static_cast<int>(v));
    }
    occ.push_back(std::move(row));
  } else {
    if (j.size() != species_count) fail(path, "expected one occupation list per species");
    for (std::size_t s = 0; s < j.size(); ++s) {
      std::string spath = path + "[" + std::to_string(s) + "]";
      if (!j[s].is_array()) fail(spath, "expected an array");
      std::vector<int> row;
      for (std::size_t i = 0; i < j[s].size(); ++i) {
        long v = as_integer(j[s][i], spath + "[" + std::to_string(i) + "]");
        if (v < 0) fail(spath, "occupations must be nonnegative");
        row.push_back(static_cast<int>(v));
      }
      occ.push_back(std::move(row));
    }
  }
  for (const auto& row : occ) {
    if (row.size() != region_size) fail(path, "occupation list length must equal the region size");
  }
  return occ;
}

InitialStateSpec parse_initial(const json& j, const std::string& path, std::size_t species_count) {
  expect_keys(j, path, {"region", "occupations", "components"});
  InitialStateSpec init;
  const json& region = require(j, path, "region");
  if (!region.is_array() || region.empty()) fail(path + ".region", "expected a nonempty array");
  for (std::size_t i = 0; i < region.size(); ++i) {
    init.region.push_back(
        static_cast<int>(as_integer(region[i], path + ".region[" + std::to_string(i) + "]")));
  }
  bool has_occ = j.contains("occupations");
  bool has_comp = j.contains("components");
  if (has_occ == has_comp) {
    fail(path, "expected exactly one of 'occupations' or 'components'");
  }
  if (has_occ) {
    InitialStateSpec::Component comp;
    comp.occupations =
        parse_occupations(j.at("occupations"), path + ".occupations", species_count,
                          init.region.size());
    init.components.push_back(std::move(comp));
  } else {
    const json& comps = j.at("components");
    if (!comps.is_array() || comps.empty()) fail(path + ".components", "expected a nonempty array");
    for (std::size_t c = 0; c < comps.size(); ++c) {
      std::string cpath = path + ".components[" + std::to_string(c) + "]";
      expect_keys(comps[c], cpath, {"occupations", "amplitude"});
      InitialStateSpec::Component comp;
      comp.occupations = parse_occupations(require(comps[c], cpath, "occupations"),
                                           cpath + ".occupations", species_count,
                                           init.region.size());
      if (comps[c].contains("amplitude")) {
        comp.amplitude = as_complex(comps[c].at("amplitude"), cpath + ".amplitude");
      }
      init.components.push_back(std::move(comp));
    }
  }
  return init;
}

LocalObservable parse_observable(const json& j, const std::string& path) {
  expect_keys(j, path, {"name", "species", "site", "terms"});
  LocalObservable obs;
  obs.name = as_string(require(j, path, "name"), path + ".name");
  if (obs.name.empty()) fail(path + ".name", "must be nonempty");
  if (j.contains("species")) {
    obs.species = static_cast<std::size_t>(as_integer(j.at("species"), path + ".species"));
  }
  obs.site = static_cast<int>(as_integer(require(j, path, "site"), path + ".site"));
  const json& terms = require(j, path, "terms");
  if (!terms.is_array() || terms.empty()) fail(path + ".terms", "expected a nonempty array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string tpath = path + ".terms[" + std::to_string(i) + "]";
    expect_keys(terms[i], tpath, {"p", "q", "coeff"});
    MonomialTerm term;
    term.p = static_cast<int>(as_integer(require(terms[i], tpath, "p"), tpath + ".p"));
    term.q = static_cast<int>(as_integer(require(terms[i], tpath, "q"), tpath + ".q"));
    if (term.p < 0 || term.q < 0) fail(tpath, "exponents must be nonnegative");
    term.coeff = as_complex(require(terms[i], tpath, "coeff"), tpath + ".coeff");
    obs.terms.push_back(term);
  }
  return obs;
}

void parse_checks(const json& j, const std::string& path, ExperimentConfig& cfg) {
  expect_keys(j, path,
              {"moments", "observables", "correlators", "dominance_tolerance",
               "identity_tolerance", "arrival_epsilon"});
  if (j.contains("moments")) {
    const json& moments = j.at("moments");
    if (!moments.is_array()) fail(path + ".moments", "expected an array");
    for (std::size_t i = 0; i < moments.size(); ++i) {
      long p = as_integer(moments[i], path + ".moments[" + std::to_string(i) + "]");
      if (p < 1) fail(path + ".moments", "orders must be >= 1");
      cfg.request.moments.push_back(static_cast<int>(p));
    }
  }
  if (j.contains("observables")) {
    const json& obs = j.at("observables");
    if (!obs.is_array()) fail(path + ".observables", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      cfg.request.observables.push_back(
          parse_observable(obs[i], path + ".observables[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("correlators")) {
    const json& cors = j.at("correlators");
    if (!cors.is_array()) fail(path + ".correlators", "expected an array");
    for (std::size_t i = 0; i < cors.size(); ++i) {
      std::string cpath = path + ".correlators[" + std::to_string(i) + "]";
      expect_keys(cors[i], cpath, {"name", "left", "right"});
      TwoSiteObservable cor;
      cor.name = as_string(require(cors[i], cpath, "name"), cpath + ".name");
      cor.left = parse_observable(require(cors[i], cpath, "left"), cpath + ".left");
      cor.right = parse_observable(require(cors[i], cpath, "right"), cpath + ".right");
      if (cor.left.name.empty()) cor.left.name = cor.name + "_left";
      if (cor.right.name.empty()) cor.right.name = cor.name + "_right";
      cfg.request.correlators.push_back(std::move(cor));
    }
  }
  if (j.contains("dominance_tolerance")) {
    cfg.thresholds.dominance = as_number(j.at("dominance_tolerance"), path + ".dominance_tolerance");
    if (cfg.thresholds.dominance <= 0.0) fail(path + ".dominance_tolerance", "must be positive");
  }
  if (j.contains("identity_tolerance")) {
    cfg.thresholds.identity = as_number(j.at("identity_tolerance"), path + ".identity_tolerance");
    if (cfg.thresholds.identity <= 0.0) fail(path + ".identity_tolerance", "must be positive");
  }
  if (j.contains("arrival_epsilon")) {
    cfg.thresholds.arrival_epsilon = as_number(j.at("arrival_epsilon"), path + ".arrival_epsilon");
  }
}

RunConfig parse_json(const json& root) {
  expect_keys(root, "config",
              {"lattice", "model", "initial", "time", "evolution", "checks", "output", "sweep"});
  RunConfig run;
  ExperimentConfig& cfg = run.experiment;

  auto lattice = parse_lattice(require(root, "config", "lattice"), "lattice");
  cfg.model = parse_model(require(root, "config", "model"), "model", lattice);
  cfg.initial = parse_initial(require(root, "config", "initial"), "initial",
                              cfg.model.species.size());

  const json& time = require(root, "config", "time");
  expect_keys(time, "time", {"t_max", "points"});
  double t_max = as_number(require(time, "time", "t_max"), "time.t_max");
  if (!(t_max > 0.0)) fail("time.t_max", "must be positive");
  long points = as_integer(require(time, "time", "points"), "time.points");
  if (points < 2) fail("time.points", "needs at least 2 grid points");
  cfg.times.resize(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) {
    cfg.times[static_cast<std::size_t>(i)] =
        t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  }

  if (root.contains("evolution")) {
    std::string evo = as_string(root.at("evolution"), "evolution");
    if (evo == "unitary") {
      cfg.dissipative = false;
    } else if (evo == "lindblad") {
      cfg.dissipative = true;
    } else {
      fail("evolution", "expected \"unitary\" or \"lindblad\"");
    }
  } else {
    cfg.dissipative = cfg.model.loss_rate > 0.0;
  }

  if (root.contains("checks")) parse_checks(root.at("checks"), "checks", cfg);

  if (root.contains("output")) {
    const json& out = root.at("output");
    expect_keys(out, "output", {"directory", "formats"});
    if (out.contains("directory")) {
      run.output.directory = as_string(out.at("directory"), "output.directory");
      if (run.output.directory.empty()) fail("output.directory", "must be nonempty");
    }
    if (out.contains("formats")) {
      const json& formats = out.at("formats");
      if (!formats.is_array() || formats.empty()) fail("output.formats", "expected a nonempty array");
      run.output.csv = false;
      run.output.json = false;
      for (std::size_t i = 0; i < formats.size(); ++i) {
        std::string f = as_string(formats[i], "output.formats[" + std::to_string(i) + "]");
        if (f == "csv") {
          run.output.csv = true;
        } else if (f == "json") {
          run.output.json = true;
        } else {
          fail("output.formats", "expected \"csv\" or \"json\"");
        }
      }
    }
  }

  if (root.contains("sweep")) {
    const json& sweep = root.at("sweep");
    expect_keys(sweep, "sweep", {"parameter", "values"});
    run.sweep.parameter = as_string(require(sweep, "sweep", "parameter"), "sweep.parameter");
    if (run.sweep.parameter != "tau" && run.sweep.parameter != "U" &&
        run.sweep.parameter != "lambda") {
      fail("sweep.parameter",
           "expected \"tau\", \"U\" or \"lambda\" (structural parameters change the basis)");
    }
    const json& values = require(sweep, "sweep", "values");
    if (!values.is_array() || values.empty()) fail("sweep.values", "expected a nonempty array");
    for (std::size_t i = 0; i < values.size(); ++i) {
      run.sweep.values.push_back(as_number(values[i], "sweep.values[" + std::to_string(i) + "]"));
    }
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return run;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lcone

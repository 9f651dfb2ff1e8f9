#include "qreg/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "qreg/analytic.hpp"
#include "qreg/error.hpp"
#include "qreg/oracle.hpp"
#include "qreg/report.hpp"
#include "qreg/variational.hpp"

namespace qreg::cli {

using report::Json;

namespace {

[[noreturn]] void bad_input(const std::string& message) { fail(ErrorKind::InvalidInput, message); }

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) bad_input(std::string(what) + ": expected integer, got '" + std::string(text) + "'");
  return value;
}

Command parse_command(std::string_view name) {
  if (name == "spectrum") return Command::Spectrum;
  if (name == "wavefunction") return Command::Wavefunction;
  if (name == "verify") return Command::Verify;
  if (name == "compare") return Command::Compare;
  bad_input("unknown command '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  bad_input("format must be csv or json");
}

Source parse_source(std::string_view name) {
  if (name == "closed_form") return Source::ClosedForm;
  if (name == "oracle") return Source::Oracle;
  bad_input("source must be closed_form or oracle");
}

std::vector<std::string> parse_systems(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (auto s : system_names()) out.emplace_back(s);
      continue;
    }
    const auto& known = system_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) bad_input("unknown system '" + name + "'");
    out.push_back(name);
  }
  if (out.empty()) bad_input("no system selected");
  return out;
}

// Config values arrive as JSON; flags arrive as strings. Both funnel through
// the same setters so validation is identical.
struct Settings {
  std::optional<std::string> command;
  std::vector<std::string> systems;
  std::optional<double> m, mu, ks, alpha, v0, theta_max, k;
  std::optional<std::string> n, l, grid, format, out, source;
  std::optional<int> levels;
};

std::string scalar_text(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad_input("config key '" + key + "' must be a string or integer");
}

double number(const Json& v, const std::string& key) {
  if (!v.is_number()) bad_input("config key '" + key + "' must be a number");
  return v.get<double>();
}

Settings read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    bad_input("config '" + path + "' is not valid JSON");
  }
  if (!doc.is_object()) bad_input("config must be a JSON object");
  Settings s;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "command") {
      s.command = scalar_text(v, key);
    } else if (key == "system") {
      if (v.is_array()) {
        for (const auto& e : v) s.systems.push_back(scalar_text(e, key));
      } else {
        s.systems.push_back(scalar_text(v, key));
      }
    } else if (key == "m") {
      s.m = number(v, key);
    } else if (key == "mu") {
      s.mu = number(v, key);
    } else if (key == "ks") {
      s.ks = number(v, key);
    } else if (key == "alpha") {
      s.alpha = number(v, key);
    } else if (key == "v0") {
      s.v0 = number(v, key);
    } else if (key == "theta-max") {
      s.theta_max = number(v, key);
    } else if (key == "k") {
      s.k = number(v, key);
    } else if (key == "n") {
      s.n = scalar_text(v, key);
    } else if (key == "l") {
      s.l = scalar_text(v, key);
    } else if (key == "grid") {
      s.grid = scalar_text(v, key);
    } else if (key == "format") {
      s.format = scalar_text(v, key);
    } else if (key == "out") {
      s.out = scalar_text(v, key);
    } else if (key == "source") {
      s.source = scalar_text(v, key);
    } else if (key == "levels") {
      if (!v.is_number_integer()) bad_input("config key 'levels' must be an integer");
      s.levels = v.get<int>();
    } else {
      bad_input("unknown config key '" + key + "'");
    }
  }
  return s;
}

template <class T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
  if (top) base = top;
}

Job build_job(const Settings& s) {
  Job job;
  if (!s.command) bad_input("no command given (spectrum, wavefunction, verify or compare)");
  job.command = parse_command(*s.command);
  job.systems = parse_systems(s.systems.empty() ? std::vector<std::string>{"all"} : s.systems);
  if (s.m) job.params.m = *s.m;
  if (s.mu) job.params.mu = *s.mu;
  try {
    job.params.validate();
  } catch (const Error& e) {
    bad_input(e.what());
  }
  if (s.ks) job.ks = *s.ks;
  if (s.alpha) job.alpha = *s.alpha;
  if (s.v0) job.v0 = *s.v0;
  if (!(std::isfinite(job.ks) && job.ks > 0.0)) bad_input("ks must be positive");
  if (!(std::isfinite(job.alpha) && job.alpha > 0.0)) bad_input("alpha must be positive");
  if (!std::isfinite(job.v0)) bad_input("v0 must be finite");
  if (s.n) job.n = IntRange::parse(*s.n, "n");
  if (s.l) job.l = IntRange::parse(*s.l, "l");
  if (job.n && job.n->first < 0) bad_input("n must be non-negative");
  if (job.l && job.l->first < 0) bad_input("l must be non-negative");
  if (job.l && std::none_of(job.systems.begin(), job.systems.end(),
                            [&](const std::string& name) { return job.system(name).is_polar(); })) {
    bad_input("l applies only to polar systems");
  }
  if (s.grid) job.grid = GridSpec::parse(*s.grid);
  if (s.theta_max) {
    if (!(std::isfinite(*s.theta_max) && *s.theta_max > 0.0)) bad_input("theta-max must be positive");
    job.theta_max = *s.theta_max;
  }
  if (s.levels) {
    if (*s.levels < 2 || *s.levels > 4) bad_input("levels must be between 2 and 4");
    job.levels = *s.levels;
  }
  if (s.format) job.format = parse_format(*s.format);
  if (s.out) job.out = *s.out;
  if (s.k) {
    if (!(std::isfinite(*s.k) && *s.k > 0.0)) bad_input("k must be positive");
    job.k = s.k;
  }
  if (s.source) job.source = parse_source(*s.source);
  if (job.command == Command::Wavefunction) {
    if (job.systems.size() != 1) bad_input("wavefunction needs exactly one system");
    if (job.n && job.n->first != job.n->last) bad_input("wavefunction needs a single n");
    if (job.l && job.l->first != job.l->last) bad_input("wavefunction needs a single l");
  }
  return job;
}

report::RunSettings run_settings(const Job& job) {
  report::RunSettings rs;
  rs.params = job.params;
  rs.grid = job.grid;
  rs.levels = job.levels;
  rs.theta_max = job.theta_max;
  return rs;
}

Json job_header(const Job& job) {
  Json h = report::settings_header(run_settings(job));
  h["command"] = std::string(to_string(job.command));
  h["systems"] = job.systems;
  h["potential_params"] = {{"ks", job.ks}, {"alpha", job.alpha}, {"v0", job.v0}};
  return h;
}

std::string csv_number(double v) { return std::isfinite(v) ? report::format_number(v) : ""; }

std::ostream& target(const Job& job, std::ostream& fallback, std::ofstream& file) {
  if (job.out.empty()) return fallback;
  file.open(job.out, std::ios::binary);
  if (!file) bad_input("cannot open output '" + job.out + "'");
  return file;
}

int run_spectrum(const Job& job, std::ostream& os) {
  const Format fmt = job.format.value_or(Format::Csv);
  Json entries = Json::array();
  if (fmt == Format::Csv) os << "system,n,l,energy_paper,energy_printed,label\n";
  for (const auto& name : job.systems) {
    const SystemSpec system = job.system(name);
    for (const QuantumNumbers& qn : job.states(system)) {
      double e = 0.0;
      double printed = 0.0;
      std::string label;
      if (system.is_continuum()) {
        const double length = job.grid ? job.grid->right_wall() : 1.0;
        e = printed = analytic::box_energy(job.params, system, qn, length);
        label = "dirichlet_box";
      } else {
        e = analytic::energy(job.params, system, qn);
        printed = analytic::energy_as_printed(job.params, system, qn);
        label = analytic::spectrum(job.params, system, qn.n, qn.n, qn.l_or_zero()).front().degeneracy_label;
      }
      if (fmt == Format::Csv) {
        os << name << ',' << qn.n << ',' << (qn.l ? std::to_string(*qn.l) : "") << ',' << csv_number(e) << ','
           << csv_number(printed) << ',' << label << '\n';
      } else {
        entries.push_back({{"system", name},
                           {"n", qn.n},
                           {"l", qn.l ? Json(*qn.l) : Json(nullptr)},
                           {"energy_paper", e},
                           {"energy_printed", printed},
                           {"label", label}});
      }
    }
  }
  if (fmt == Format::Json) {
    Json doc;
    doc["header"] = job_header(job);
    doc["entries"] = entries;
    doc["identities"] = Json::array();
    report::write_json(os, doc);
  }
  return 0;
}

int run_wavefunction(const Job& job, std::ostream& os) {
  const SystemSpec system = job.system(job.systems.front());
  const QuantumNumbers qn = job.states(system).front();
  const report::RunSettings rs = run_settings(job);
  const GridSpec grid = report::oracle_grid(rs, system, qn);

  SampledField reduced;
  double energy = 0.0;
  if (job.source == Source::Oracle) {
    const auto res = oracle::refine_and_extrapolate(job.params, system, qn, static_cast<std::size_t>(qn.n), grid,
                                                    job.levels);
    reduced = res.eigenvector;
    energy = res.extrapolated_energy;
    for (const auto& w : res.warnings) warn(w);
  } else {
    analytic::StateLabel label = qn;
    if (system.is_continuum()) {
      const double k = job.k ? *job.k : analytic::box_wavenumber(system, qn, grid.right_wall());
      label = analytic::Wavenumber{k, qn.l_or_zero(), false};
      energy = job.params.kinetic_scale() * k * k + system.potential_energy(1.0);
    } else {
      energy = analytic::energy(job.params, system, qn);
    }
    const SampledField raw = analytic::sample_eigenfunction(job.params, system, label, {}, grid);
    reduced = analytic::normalize(
        to_reduced(raw, system, system.is_polar() ? AmplitudeForm::Polar : AmplitudeForm::Reduced));
  }

  WavefunctionTable t;
  const auto q = reduced.grid();
  const auto x = reduced.values();
  const auto qp = variational::quantum_potential(reduced, job.params);
  for (std::size_t i = 0; i < q.size(); ++i) {
    t.q.push_back(q[i]);
    t.x.push_back(x[i]);
    t.p.push_back(x[i] * x[i]);
    t.quantum.push_back(qp.values[i] ? *qp.values[i] : std::numeric_limits<double>::quiet_NaN());
    t.s.push_back(phase_action(job.params, q[i], q.front(), energy, 0.0));
  }

  if (job.format.value_or(Format::Csv) == Format::Csv) {
    write_wavefunction_csv(os, t);
    return 0;
  }
  Json doc;
  doc["header"] = job_header(job);
  doc["header"]["state"] = {{"system", job.systems.front()},
                            {"n", qn.n},
                            {"l", qn.l ? Json(*qn.l) : Json(nullptr)},
                            {"source", job.source == Source::Oracle ? "oracle" : "closed_form"},
                            {"energy", energy},
                            {"amplitude", system.is_polar() ? "sqrt(r) rho(r)" : "X(x)"},
                            {"grid", reduced.spec().to_string()}};
  Json cols;
  cols["q"] = t.q;
  cols["X"] = t.x;
  cols["P"] = t.p;
  Json qcol = Json::array();
  for (double v : t.quantum) qcol.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
  cols["Q"] = qcol;
  cols["S"] = t.s;
  doc["entries"] = cols;
  doc["identities"] = Json::array();
  report::write_json(os, doc);
  return 0;
}

int run_compare(const Job& job, std::ostream& os, bool verify) {
  const report::RunSettings rs = run_settings(job);
  Json entries = Json::array();
  Json identities = Json::array();
  bool passed = true;
  for (const auto& name : job.systems) {
    const SystemSpec system = job.system(name);
    const auto states = job.states(system);
    if (verify) {
      const auto suite = report::verify_system(rs, system, states);
      for (const auto& row : suite.rows) entries.push_back(report::to_json(row));
      for (const auto& check : suite.checks) {
        Json c = report::to_json(check);
        c["system"] = name;
        identities.push_back(std::move(c));
      }
      passed = passed && suite.passed();
    } else {
      for (const auto& row : report::compare_states(rs, system, states)) {
        entries.push_back(report::to_json(row));
        for (const auto& id : row.identities) identities.push_back(report::to_json(id));
      }
    }
  }
  if (verify) {
    for (const auto& check : report::substrate_checks(rs)) {
      Json c = report::to_json(check);
      c["system"] = nullptr;
      identities.push_back(std::move(c));
      passed = passed && check.passed;
    }
  }
  Json doc;
  doc["header"] = job_header(job);
  doc["entries"] = entries;
  doc["identities"] = identities;
  if (verify) doc["passed"] = passed;
  if (job.format.value_or(Format::Json) == Format::Csv) {
    os << "system,n,l,target,energy_paper,energy_oracle,abs_gap,rel_gap,analytic_residual,oracle_residual,verdict\n";
    for (const auto& e : entries) {
      os << e["system"].get<std::string>() << ',' << e["n"].get<int>() << ','
         << (e["l"].is_null() ? std::string() : std::to_string(e["l"].get<int>())) << ','
         << e["target"].get<std::string>() << ',' << csv_number(e["energy_paper"].get<double>()) << ','
         << csv_number(e["energy_oracle"].get<double>()) << ',' << csv_number(e["abs_gap"].get<double>()) << ','
         << csv_number(e["rel_gap"].get<double>()) << ',' << csv_number(e["analytic_residual"].get<double>())
         << ',' << csv_number(e["oracle_residual"].get<double>()) << ',' << e["verdict"].get<std::string>()
         << '\n';
    }
  } else {
    report::write_json(os, doc);
  }
  return verify && !passed ? 1 : 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::Overflow:
    case ErrorKind::Degenerate:
    case ErrorKind::IllConditioned:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Wavefunction: return "wavefunction";
    case Command::Verify: return "verify";
    case Command::Compare: return "compare";
  }
  return "verify";
}

IntRange IntRange::parse(std::string_view text, std::string_view what) {
  const auto dots = text.find("..");
  IntRange r;
  if (dots == std::string_view::npos) {
    r.first = r.last = parse_int(text, what);
  } else {
    r.first = parse_int(text.substr(0, dots), what);
    r.last = parse_int(text.substr(dots + 2), what);
  }
  if (r.first < 0 || r.last < 0) bad_input(std::string(what) + " must be non-negative");
  if (r.last < r.first) bad_input(std::string(what) + " range is empty");
  if (r.last - r.first > 1000) bad_input(std::string(what) + " range is too long");
  return r;
}

std::vector<int> IntRange::values() const {
  std::vector<int> v;
  for (int i = first; i <= last; ++i) v.push_back(i);
  return v;
}

SystemSpec Job::system(std::string_view name) const { return make_system(name, ks, alpha, v0); }

std::vector<QuantumNumbers> Job::states(const SystemSpec& system) const {
  const bool wide = system.is_continuum() || !system.is_polar();
  const IntRange nr = n.value_or(IntRange{0, wide ? 2 : 1});
  std::vector<QuantumNumbers> out;
  if (!system.is_polar()) {
    for (int v : nr.values()) out.push_back(QuantumNumbers::radial(v));
    return out;
  }
  const IntRange nn = n.value_or(IntRange{0, 1});
  const IntRange lr = l.value_or(IntRange{0, system.is_continuum() ? 2 : 1});
  for (int lv : lr.values()) {
    for (int nv : nn.values()) out.push_back(QuantumNumbers::polar(nv, lv));
  }
  return out;
}

Job parse(const std::vector<std::string>& args, std::string* help) {
  CLI::App app{"qreg: regularized stationary quantum systems, closed forms against a finite-difference oracle",
               "qreg"};
  app.set_help_flag("-h,--help", "Print this help message and exit");
  app.require_subcommand(0, 1);

  std::vector<std::string> systems;
  std::optional<std::string> n, l, grid, format, out, config, source;
  std::optional<double> m, mu, ks, alpha, v0, theta_max, k;
  std::optional<int> levels;

  app.add_option("--system", systems,
                 "free1d|harmonic1d|coulomb1d|const2d|harmonic2d|coulomb2d|all (default all)")
      ->delimiter(',');
  app.add_option("--m", m, "mass (default 1)");
  app.add_option("--mu", mu, "information coupling (default 1)");
  app.add_option("--ks", ks, "spring constant (default 1)");
  app.add_option("--alpha", alpha, "Coulomb strength (default 1)");
  app.add_option("--v0", v0, "constant potential depth, V = -v0 (default 0)");
  app.add_option("--n", n, "radial index range A..B (default 0..2 in 1D and const2d, 0..1 otherwise)");
  app.add_option("--l", l, "angular range A..B (default 0..2 for const2d, 0..1 otherwise)");
  app.add_option("--grid", grid,
                 "qmin:qmax:N oracle grid; default box (0,1) for free1d/const2d, 20 oscillator lengths for "
                 "harmonic, max(60, 15 n_eff^2) mu^2/(m alpha) for Coulomb, N = 4000");
  app.add_option("--theta-max", theta_max, "angular box length (default 2 pi)");
  app.add_option("--levels", levels, "grid-halving levels for extrapolation, 2..4 (default 3)");
  app.add_option("--format", format, "csv|json (default csv for spectrum/wavefunction, json otherwise)");
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--config", config, "JSON config; flags override keys of the same name");
  app.add_option("--k", k, "wavenumber for continuum wavefunctions (default: box wavenumber)");
  app.add_option("--source", source, "closed_form|oracle for wavefunction (default closed_form)");

  std::vector<CLI::App*> subs;
  for (const char* name : {"spectrum", "wavefunction", "verify", "compare"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    subs.push_back(sub);
  }
  subs[0]->description("closed-form spectrum table");
  subs[1]->description("sampled amplitude as CSV columns q,X,P,Q,S");
  subs[2]->description("oracle invariants and identities; exit 1 on any failed assertion");
  subs[3]->description("closed form vs oracle report; gaps are findings, not failures");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = app.help();
    return {};
  } catch (const CLI::ParseError& e) {
    bad_input(e.what());
  }

  Settings s;
  if (config) s = read_config(*config);
  for (auto* sub : subs) {
    if (sub->parsed()) s.command = sub->get_name();
  }
  if (!systems.empty()) s.systems = systems;
  overlay(s.m, m);
  overlay(s.mu, mu);
  overlay(s.ks, ks);
  overlay(s.alpha, alpha);
  overlay(s.v0, v0);
  overlay(s.theta_max, theta_max);
  overlay(s.k, k);
  overlay(s.n, n);
  overlay(s.l, l);
  overlay(s.grid, grid);
  overlay(s.format, format);
  overlay(s.out, out);
  overlay(s.source, source);
  overlay(s.levels, levels);
  return build_job(s);
}

int execute(const Job& job, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = target(job, out, file);
  switch (job.command) {
    case Command::Spectrum: return run_spectrum(job, os);
    case Command::Wavefunction: return run_wavefunction(job, os);
    case Command::Verify: return run_compare(job, os, true);
    case Command::Compare: return run_compare(job, os, false);
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    std::string help;
    Job job = parse(args, &help);
    if (!help.empty()) {
      out << help;
      return 0;
    }
    return execute(job, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return 3;
  }
}

void write_wavefunction_csv(std::ostream& os, const WavefunctionTable& t) {
  os << "q,X,P,Q,S\n";
  for (std::size_t i = 0; i < t.q.size(); ++i) {
    os << csv_number(t.q[i]) << ',' << csv_number(t.x[i]) << ',' << csv_number(t.p[i]) << ','
       << csv_number(t.quantum[i]) << ',' << csv_number(t.s[i]) << '\n';
  }
}

WavefunctionTable read_wavefunction_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "q,X,P,Q,S") bad_input("wavefunction CSV must start with q,X,P,Q,S");
  WavefunctionTable t;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.empty()) {
        cells.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size()) bad_input("bad number on CSV row " + std::to_string(row));
      cells.push_back(v);
    }
    if (line.back() == ',') cells.push_back(std::numeric_limits<double>::quiet_NaN());
    if (cells.size() != 5) bad_input("CSV row " + std::to_string(row) + " needs 5 columns");
    t.q.push_back(cells[0]);
    t.x.push_back(cells[1]);
    t.p.push_back(cells[2]);
    t.quantum.push_back(cells[3]);
    t.s.push_back(cells[4]);
  }
  return t;
}

}  // namespace qreg::cli

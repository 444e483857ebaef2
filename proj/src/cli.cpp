#include "magic_bullet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "magic_bullet/counting.hpp"
#include "magic_bullet/epr_core.hpp"
#include "magic_bullet/errors.hpp"
#include "magic_bullet/fock_oracle.hpp"
#include "magic_bullet/opa_model.hpp"
#include "magic_bullet/pair_projection.hpp"
#include "magic_bullet/quadrature.hpp"
#include "magic_bullet/rng.hpp"

namespace magic_bullet::cli {
namespace {

struct KeySpec {
  const char* key;
  const char* fallback;
  const char* help;
};

struct CommandSpec {
  Command command;
  const char* name;
  const char* help;
  std::vector<KeySpec> keys;
};

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> specs = {
      {Command::kSpectra, "spectra", "Fluorescence and phase-sensitive spectra on a detuning grid",
       {{"g2", "0.01", "normalized pump power G^2"},
        {"x-grid", "-10:10:201", "linear detuning grid lo:hi:n (units of Gamma)"},
        {"gamma-hz", "", "Gamma/2pi in Hz; adds a detuning_hz column"}}},
      {Command::kQuadrature, "quadrature", "Homodyne samples of a two-mode squeezed state",
       {{"nbar", "1", "mean photons per mode"}, {"trials", "10000", "number of samples"}}},
      {Command::kPairs, "pairs", "Conjugate-state projection of a single photon pair",
       {{"g2", "0.01", "normalized pump power G^2"},
        {"gamma-t", "100", "counting window Gamma*T"},
        {"modes", "201", "odd number of Fourier modes"},
        {"phi", "gaussian", "signal wavepacket: gaussian | flat"},
        {"phi-width", "0.05", "rms width (gaussian) or half width (flat), units of Gamma"},
        {"phi-center", "0", "wavepacket centre detuning, units of Gamma"},
        {"gamma-hz", "", "Gamma/2pi in Hz (labels only)"}}},
      {Command::kFig3, "fig3", "Cavity-loading photocount-difference variance sweep",
       {{"g2", "0.01", "normalized pump power G^2"},
        {"dx", "0,1,2", "comma-separated detunings (units of Gamma)"},
        {"gc-grid", "1e-3:1e1:25", "log grid of Gamma_c/Gamma lo:hi:n"},
        {"gamma-hz", "", "Gamma/2pi in Hz (labels only)"}}},
      {Command::kFilters, "filters", "Butterworth filter-penetration variance sweep",
       {{"g2", "0.01", "normalized pump power G^2"},
        {"k", "1,2,4,8", "comma-separated Butterworth orders"},
        {"wc-over-g", "1e-3", "comma-separated omega_c/Gamma values"},
        {"dx", "0", "filter detuning (units of Gamma)"},
        {"gamma-hz", "", "Gamma/2pi in Hz (labels only)"}}},
      {Command::kEprDemo, "epr-demo", "Finite-dimensional EPR magic-bullet demonstration",
       {{"d", "4", "Hilbert-space dimension"}, {"trials", "10000", "number of joint measurements"}}},
  };
  return specs;
}

const CommandSpec& spec_for(Command c) {
  for (const auto& s : commands()) {
    if (s.command == c) return s;
  }
  throw ValidationError("unknown command");
}

// Keys accepted everywhere (flags and config file) but not part of params.
const std::vector<std::string> kMetaKeys = {"seed", "output", "with-oracle"};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw ValidationError("invalid value for '" + key + "': '" + value + "' (" + why + ")");
}

double to_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    bad_value(key, text, "not a number");
  }
  if (used != t.size() || !std::isfinite(v)) bad_value(key, text, "not a finite number");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    bad_value(key, text, "not an integer");
  }
  if (used != t.size()) bad_value(key, text, "not an integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, text, "expected true or false");
}

std::string fmt_real(double v) { return fmt::format("{}", v); }

void validate(const RunConfig& cfg) {
  const auto require = [](bool ok, const std::string& key, const std::string& value,
                          const std::string& why) {
    if (!ok) bad_value(key, value, why);
  };
  const auto& p = cfg.params;
  if (cfg.has("g2")) {
    const double g2 = cfg.real("g2");
    opa::OpaParams check(g2);  // threshold and range checks name g2 in the message
  }
  if (cfg.has("gamma-hz") && !p.at("gamma-hz").empty()) {
    require(cfg.real("gamma-hz") > 0.0, "gamma-hz", p.at("gamma-hz"), "must be > 0");
  }
  switch (cfg.command) {
    case Command::kSpectra: {
      const auto g = cfg.grid("x-grid");
      require(g.n >= 1, "x-grid", p.at("x-grid"), "n must be >= 1");
      break;
    }
    case Command::kQuadrature:
      require(cfg.real("nbar") >= 0.0, "nbar", p.at("nbar"), "must be >= 0");
      require(cfg.integer("trials") >= 0, "trials", p.at("trials"), "must be >= 0");
      break;
    case Command::kPairs: {
      require(cfg.real("gamma-t") >= pairs::kMinWindow, "gamma-t", p.at("gamma-t"),
              "must be >= 50");
      const auto m = cfg.integer("modes");
      require(m >= 1 && m % 2 == 1, "modes", p.at("modes"), "must be a positive odd integer");
      const auto& phi = p.at("phi");
      require(phi == "gaussian" || phi == "flat", "phi", phi, "expected gaussian or flat");
      require(cfg.real("phi-width") > 0.0, "phi-width", p.at("phi-width"), "must be > 0");
      cfg.real("phi-center");
      break;
    }
    case Command::kFig3: {
      require(!cfg.reals("dx").empty(), "dx", p.at("dx"), "empty list");
      const auto g = cfg.grid("gc-grid");
      require(g.n >= 0 && g.lo > 0.0 && g.hi > 0.0, "gc-grid", p.at("gc-grid"),
              "bounds must be > 0 and n >= 0");
      break;
    }
    case Command::kFilters: {
      const auto ks = cfg.integers("k");
      require(!ks.empty() && std::all_of(ks.begin(), ks.end(), [](int k) { return k >= 1; }),
              "k", p.at("k"), "orders must be >= 1");
      const auto wcs = cfg.reals("wc-over-g");
      require(!wcs.empty() &&
                  std::all_of(wcs.begin(), wcs.end(), [](double w) { return w > 0.0; }),
              "wc-over-g", p.at("wc-over-g"), "values must be > 0");
      cfg.real("dx");
      break;
    }
    case Command::kEprDemo:
      require(cfg.integer("d") >= 1 && cfg.integer("d") <= 256, "d", p.at("d"),
              "must be in [1, 256]");
      require(cfg.integer("trials") >= 0, "trials", p.at("trials"), "must be >= 0");
      break;
  }
  if (cfg.with_oracle &&
      (cfg.command == Command::kPairs || cfg.command == Command::kEprDemo)) {
    throw ValidationError("invalid value for 'with-oracle': no oracle cross-check for " +
                          command_name(cfg.command));
  }
}

constexpr double kOracleTolerance = 1e-3;

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const RunConfig& cfg, std::vector<std::string> columns)
      : out_(out), columns_(std::move(columns)) {
    out_ << header_comment(cfg, columns_) << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

void run_spectra(const RunConfig& cfg, std::ostream& out) {
  const opa::OpaParams p(cfg.real("g2"));
  const auto g = cfg.grid("x-grid");
  const bool hz = !cfg.params.at("gamma-hz").empty();
  std::vector<std::string> cols{"x", "s_n", "s_p"};
  if (hz) cols.emplace_back("detuning_hz");
  if (cfg.with_oracle) {
    cols.emplace_back("oracle_s_p");
    cols.emplace_back("oracle_agree");
  }
  CsvWriter csv(out, cfg, cols);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.n == 1 ? g.lo : g.lo + (g.hi - g.lo) * i / (g.n - 1);
    const double sn = opa::fluorescence_spectrum(p, x);
    const double sp = opa::phase_sensitive_spectrum(p, x);
    std::vector<std::string> cells{fmt_real(x), fmt_real(sn), fmt_real(sp)};
    if (hz) cells.push_back(fmt_real(x * cfg.real("gamma-hz")));
    if (cfg.with_oracle) {
      const double bound = std::sqrt(sn * (sn + 1.0));
      const bool agree = std::abs(sp - bound) <= 1e-12 * std::max(bound, 1e-300);
      cells.push_back(fmt_real(bound));
      cells.emplace_back(agree ? "pass" : "fail");
    }
    csv.row(cells);
  }
}

void run_quadrature(const RunConfig& cfg, std::ostream& out, std::ostream& info) {
  const auto s = opa::TwoModeSqueezedState::with_nbar(cfg.real("nbar"));
  const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
  const auto samples = quadrature::sample_homodyne(s, trials, cfg.seed);
  const auto stats = quadrature::conditional_stats(s);

  CsvWriter csv(out, cfg, {"trial", "a_s1", "a_i1"});
  double ss = 0, ii = 0, si = 0, resid = 0;
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const auto& q = samples[t];
    csv.row({std::to_string(t), fmt_real(q.a_s1), fmt_real(q.a_i1)});
    ss += q.a_s1 * q.a_s1;
    ii += q.a_i1 * q.a_i1;
    si += q.a_s1 * q.a_i1;
    const double r = q.a_i1 - stats.mean_coeff * q.a_s1;
    resid += r * r;
  }
  nlohmann::ordered_json j;
  j["command"] = "quadrature";
  j["version"] = kVersion;
  j["nbar"] = s.nbar;
  j["trials"] = trials;
  j["seed"] = cfg.seed;
  j["analytic"] = {{"marg_var", stats.marg_var},
                   {"mean_coeff", stats.mean_coeff},
                   {"cond_var", stats.cond_var},
                   {"cross_cov", stats.cross_cov()},
                   {"epr_limit_deviation", quadrature::epr_limit_deviation(s)}};
  if (trials > 0) {
    const double n = static_cast<double>(trials);
    j["empirical"] = {{"var_s", ss / n}, {"var_i", ii / n}, {"cross_cov", si / n},
                      {"cond_var", resid / n}};
  }
  if (cfg.with_oracle) {
    const auto f = fock::homodyne_moments(fock::make_tmss(s.nbar));
    const bool agree = std::abs(f.var_s - stats.marg_var) <= 1e-6 &&
                       std::abs(f.mean_coeff() - stats.mean_coeff) <= 1e-6 &&
                       std::abs(f.cond_var() - stats.cond_var) <= 1e-6;
    j["oracle"] = {{"marg_var", f.var_s},
                   {"mean_coeff", f.mean_coeff()},
                   {"cond_var", f.cond_var()},
                   {"agree", agree}};
  }
  info << j.dump(2) << '\n';
}

void run_pairs(const RunConfig& cfg, std::ostream& out, std::ostream& info) {
  const opa::OpaParams p(cfg.real("g2"));
  const auto pair = pairs::build_pair_state(p, cfg.real("gamma-t"),
                                            static_cast<int>(cfg.integer("modes")));
  const double centre = cfg.real("phi-center");
  const double width = cfg.real("phi-width");
  const auto phi = cfg.params.at("phi") == "flat" ? pairs::flat_wavepacket(pair, centre, width)
                                                  : pairs::gaussian_wavepacket(pair, centre, width);
  const auto proj = pairs::project_signal(pair, phi);
  const double fid = pairs::conjugate_fidelity(proj.idler, phi);

  CsvWriter csv(out, cfg, {"n", "psi2", "phi2", "fidelity"});
  for (int i = 0; i < pair.n_modes(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    csv.row({std::to_string(pairs::mode_index(i, pair.n_modes())),
             fmt_real(std::norm(pair.psi[k])), fmt_real(std::norm(phi.phi()[k])),
             fmt_real(fid)});
  }
  nlohmann::ordered_json j;
  j["command"] = "pairs";
  j["version"] = kVersion;
  j["projection_probability"] = proj.prob;
  j["conjugate_fidelity"] = fid;
  info << j.dump(2) << '\n';
}

void run_fig3(const RunConfig& cfg, std::ostream& out) {
  const opa::OpaParams p(cfg.real("g2"));
  const auto g = cfg.grid("gc-grid");
  const auto rows = counting::fig3_sweep(p, cfg.reals("dx"), counting::log_grid(g.lo, g.hi, g.n));
  std::vector<std::string> cols{"dx", "gc_over_g", "sigma2"};
  if (cfg.with_oracle) {
    cols.emplace_back("oracle_sigma2");
    cols.emplace_back("oracle_agree");
  }
  CsvWriter csv(out, cfg, cols);
  for (const auto& r : rows) {
    std::vector<std::string> cells{fmt_real(r.dx), fmt_real(r.gc_over_g), fmt_real(r.sigma2)};
    if (cfg.with_oracle) {
      const MeasurementConfig kernel = CavityConfig{.gc_over_g = r.gc_over_g, .dx = r.dx};
      const auto [n_bins, span] = fock::default_discretization(kernel);
      const double o = fock::bin_sigma2(p, kernel, n_bins, span);
      cells.push_back(fmt_real(o));
      cells.emplace_back(std::abs(o - r.sigma2) <= kOracleTolerance ? "pass" : "fail");
    }
    csv.row(cells);
  }
}

void run_filters(const RunConfig& cfg, std::ostream& out) {
  const opa::OpaParams p(cfg.real("g2"));
  const double dx = cfg.real("dx");
  const auto rows = counting::filter_sweep(p, cfg.integers("k"), cfg.reals("wc-over-g"), dx);
  std::vector<std::string> cols{"K", "wc_over_g", "sigma2", "law_1_over_2K"};
  if (cfg.with_oracle) {
    cols.emplace_back("oracle_sigma2");
    cols.emplace_back("oracle_agree");
  }
  CsvWriter csv(out, cfg, cols);
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.k_order), fmt_real(r.wc_over_g),
                                   fmt_real(r.sigma2), fmt_real(r.law_1_over_2k)};
    if (cfg.with_oracle) {
      const MeasurementConfig kernel = FilterConfig{r.k_order, r.wc_over_g, dx};
      const auto [n_bins, span] = fock::default_discretization(kernel);
      const double o = fock::bin_sigma2(p, kernel, n_bins, span);
      cells.push_back(fmt_real(o));
      cells.emplace_back(std::abs(o - r.sigma2) <= kOracleTolerance ? "pass" : "fail");
    }
    csv.row(cells);
  }
}

void run_epr_demo(const RunConfig& cfg, std::ostream& out) {
  const int d = static_cast<int>(cfg.integer("d"));
  const auto trials = static_cast<std::size_t>(cfg.integer("trials"));
  const epr::ScatteringMatrix s(epr::haar_unitary(d, splitmix64(cfg.seed ^ 0x5ca77e5ULL)));
  const epr::ProjectiveMeasurement m(epr::haar_unitary(d, splitmix64(cfg.seed ^ 0xba515ULL)));
  const auto pair = epr::apply_bilateral_scattering(epr::make_maximally_entangled(d), s);
  const auto probs = epr::joint_outcome_probabilities(pair, m);
  const auto outcomes = epr::measure_correlated(pair, m, trials, cfg.seed);

  double offdiag = 0.0;
  for (int z = 0; z < d; ++z) {
    for (int w = 0; w < d; ++w) {
      if (z != w) offdiag += probs(z, w);
    }
  }
  std::vector<std::size_t> marginal(static_cast<std::size_t>(d), 0);
  for (const auto& o : outcomes) ++marginal[static_cast<std::size_t>(o.first)];

  nlohmann::ordered_json j;
  j["command"] = "epr-demo";
  j["version"] = kVersion;
  j["d"] = d;
  j["trials"] = trials;
  j["seed"] = cfg.seed;
  j["match_fraction"] = epr::match_fraction(outcomes);
  j["offdiag_probability"] = offdiag;
  j["marginal_counts"] = marginal;
  out << j.dump(2) << '\n';
}

}  // namespace

std::string command_name(Command c) { return spec_for(c).name; }

bool RunConfig::has(const std::string& key) const { return params.count(key) != 0; }

double RunConfig::real(const std::string& key) const { return to_real(key, params.at(key)); }

long long RunConfig::integer(const std::string& key) const {
  return to_integer(key, params.at(key));
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(params.at(key), ',')) out.push_back(to_real(key, item));
  return out;
}

std::vector<int> RunConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split(params.at(key), ',')) {
    const long long v = to_integer(key, item);
    if (v < -1000000 || v > 1000000) bad_value(key, item, "out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

RunConfig::Grid RunConfig::grid(const std::string& key) const {
  const auto parts = split(params.at(key), ':');
  if (parts.size() != 3) bad_value(key, params.at(key), "expected lo:hi:n");
  const long long n = to_integer(key, parts[2]);
  if (n < 0 || n > 10000000) bad_value(key, params.at(key), "n out of range");
  return {to_real(key, parts[0]), to_real(key, parts[1]), static_cast<int>(n)};
}

std::map<std::string, std::string> read_flat_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_text) {
  CLI::App app{"Continuous-variable entanglement magic-bullet simulator", "magic_bullet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string seed_text;
  std::string output;
  bool with_oracle = false;
  std::string config_path;
  app.add_option("--seed", seed_text, "base RNG seed (default 0)");
  app.add_option("-o,--output", output, "output file (default: $" + std::string(kOutputDirEnv) +
                                            "/<command>.csv, else stdout)");
  app.add_flag("--with-oracle", with_oracle, "append Fock-oracle cross-check columns");
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.fallthrough();

  std::map<Command, CLI::App*> subs;
  std::map<std::string, std::string> values;  // flag values keyed by name
  for (const auto& spec : commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    for (const auto& k : spec.keys) {
      sub->add_option(std::string("--") + k.key, values[k.key],
                      std::string(k.help) + " [default: " + k.fallback + "]");
    }
    subs[spec.command] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw ValidationError(std::string("usage: ") + e.what());
  }

  RunConfig cfg;
  const CommandSpec* spec = nullptr;
  for (const auto& s : commands()) {
    if (subs[s.command]->parsed()) spec = &s;
  }
  if (spec == nullptr) throw ValidationError("usage: a command is required");
  cfg.command = spec->command;
  CLI::App* sub = subs[spec->command];

  std::map<std::string, std::string> file;
  if (config_text) {
    file = read_flat_config(*config_text);
  } else if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot read config file '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    file = read_flat_config(buf.str());
  }
  for (const auto& [key, value] : file) {
    const bool meta = std::find(kMetaKeys.begin(), kMetaKeys.end(), key) != kMetaKeys.end();
    const bool known = std::any_of(spec->keys.begin(), spec->keys.end(),
                                   [&](const KeySpec& k) { return key == k.key; });
    if (!meta && !known) {
      throw ValidationError("unknown config key '" + key + "' for command " + spec->name);
    }
  }

  for (const auto& k : spec->keys) {
    const std::string flag = std::string("--") + k.key;
    if (sub->count(flag) > 0) {
      cfg.params[k.key] = values[k.key];
    } else if (auto it = file.find(k.key); it != file.end()) {
      cfg.params[k.key] = it->second;
    } else {
      cfg.params[k.key] = k.fallback;
    }
  }

  if (app.count("--seed") == 0) {
    if (auto it = file.find("seed"); it != file.end()) seed_text = it->second;
  }
  if (!seed_text.empty()) {
    const long long s = to_integer("seed", seed_text);
    if (s < 0) bad_value("seed", seed_text, "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (app.count("--output") == 0) {
    if (auto it = file.find("output"); it != file.end()) output = it->second;
  }
  cfg.output_path = output;
  if (app.count("--with-oracle") == 0) {
    if (auto it = file.find("with-oracle"); it != file.end()) {
      with_oracle = to_bool("with-oracle", it->second);
    }
  }
  cfg.with_oracle = with_oracle;

  validate(cfg);
  return cfg;
}

std::string header_comment(const RunConfig& config, const std::vector<std::string>& columns) {
  std::string line = "# schema: ";
  for (std::size_t i = 0; i < columns.size(); ++i) line += (i ? "," : "") + columns[i];
  line += " | magic_bullet " + std::string(kVersion) + " | command=" + command_name(config.command);
  for (const auto& [k, v] : config.params) line += " " + k + "=" + v;
  line += " seed=" + std::to_string(config.seed);
  line += std::string(" with-oracle=") + (config.with_oracle ? "true" : "false");
  return line;
}

std::string resolve_output_path(const RunConfig& config) {
  if (!config.output_path.empty()) return config.output_path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    const char* ext = config.command == Command::kEprDemo ? ".json" : ".csv";
    return (std::filesystem::path(dir) / (command_name(config.command) + ext)).string();
  }
  return {};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& info) {
  const std::string path = resolve_output_path(config);
  std::ofstream file;
  if (!path.empty()) {
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ValidationError("cannot open output file '" + path + "'");
  }
  std::ostream& primary = path.empty() ? out : static_cast<std::ostream&>(file);

  switch (config.command) {
    case Command::kSpectra: run_spectra(config, primary); break;
    case Command::kQuadrature: run_quadrature(config, primary, info); break;
    case Command::kPairs: run_pairs(config, primary, info); break;
    case Command::kFig3: run_fig3(config, primary); break;
    case Command::kFilters: run_filters(config, primary); break;
    case Command::kEprDemo: run_epr_demo(config, primary); break;
  }
  primary.flush();
  return 0;
}

}  // namespace magic_bullet::cli

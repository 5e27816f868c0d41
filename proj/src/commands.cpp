#include "mflab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mflab/errors.hpp"
#include "mflab/gauges.hpp"
#include "mflab/lil.hpp"
#include "mflab/output.hpp"
#include "mflab/qb.hpp"
#include "mflab/report.hpp"
#include "mflab/spectrum.hpp"

namespace mflab {
namespace {

using ojson = nlohmann::ordered_json;

constexpr int kCheckpointFloor = 16;

const char* kEnvHelp =
    "Environment:\n"
    "  MFLAB_ENUM_BUDGET     max words enumerated for partition sums (default 2^24)\n"
    "  MFLAB_MAX_DRAWS       max N * n_max symbol draws per ensemble (default 1e10)\n"
    "  MFLAB_TAIL_MAX_LEVEL  max n1 for exact running-max tails (default 64)\n"
    "Exit codes: 0 ok, 2 validation, 3 numerical failure, 4 budget exceeded.";

std::uint64_t enumeration_budget() {
  const char* v = std::getenv("MFLAB_ENUM_BUDGET");
  if (!v || !*v) return kDefaultEnumerationBudget;
  char* end = nullptr;
  const double x = std::strtod(v, &end);
  if (end == v || *end || !(x >= 1)) throw ValidationError("MFLAB_ENUM_BUDGET must be a positive number");
  return static_cast<std::uint64_t>(x);
}

double json_real(double x) { return x; }  // NaN/inf dump as null

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    long v = 0;
    try {
      std::size_t pos = 0;
      if (item.rfind("2^", 0) == 0) {
        const long e = std::stol(item.substr(2), &pos);
        if (pos != item.size() - 2 || e < 0 || e > 30) throw std::invalid_argument(item);
        v = 1L << e;
      } else {
        v = std::stol(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ValidationError("cannot parse level '" + item + "' (integers or 2^k)");
    }
    if (v < 1 || v > (1L << 30)) throw ValidationError("level " + item + " out of range");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ValidationError("empty level list");
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end) throw ValidationError("cannot parse number '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

void require_floor(const std::vector<int>& levels) {
  for (int n : levels)
    if (n < kCheckpointFloor)
      throw ValidationError("checkpoint n = " + std::to_string(n) + " below n_min = " +
                            std::to_string(kCheckpointFloor));
}

struct Common {
  std::string model_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--model", c.model_path, "model spec file")->required();
  sub->add_option("--seed", c.seed, "master seed (u64)")->capture_default_str();
  sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (0: hardware)")->capture_default_str();
}

unsigned resolve_threads(unsigned t) {
  return t ? t : std::max(1u, std::thread::hardware_concurrency());
}

// Writes the files, then the manifest listing their digests.
class Emitter {
public:
  Emitter(const Common& c, std::string command, const std::vector<std::string>& args,
          const std::string& model_text)
      : dir_(c.out_dir) {
    m_.version = MFLAB_VERSION;
    m_.command = std::move(command);
    m_.args = args;
    m_.model_path = c.model_path;
    m_.model_text = model_text;
    m_.model_digest = sha256_hex(model_text);
    m_.seed = c.seed;
    m_.threads = c.threads;
    m_.timestamp = utc_timestamp();
  }
  void file(const std::string& name, const std::string& bytes) {
    m_.outputs[name] = write_output(dir_, name, bytes);
  }
  void finish(std::ostream& out) {
    write_output(dir_, kManifestFile, manifest_to_json(m_));
    for (const auto& [name, digest] : m_.outputs)
      out << (std::filesystem::path(dir_) / name).string() << "  " << digest.substr(0, 16) << "\n";
  }

private:
  std::string dir_;
  RunManifest m_;
};

std::string csv(const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  return out;
}

ojson not_flat_json(const NotFlatResult& r) {
  return {{"holds", r.holds}, {"flat", r.flat}, {"C", json_real(r.C)},
          {"alpha_lower_bound", json_real(r.alpha_lower_bound)},
          {"alpha_tail", json_real(r.alpha_tail)}, {"ratios", r.ratios}};
}

// spectrum ----------------------------------------------------------------

struct SpectrumOpts {
  double q_min = -2, q_max = 3, q_step = 0.05;
  std::string base;
};

void cmd_spectrum(const Common& c, const SpectrumOpts& o, const std::vector<std::string>& args,
                  std::ostream& out) {
  const std::string text = read_file(c.model_path);
  const auto model = parse_model_spec(text, c.model_path);
  const LogBase base = o.base.empty() ? (model.is_ell_adic() ? LogBase::ell : LogBase::natural)
                                      : parse_log_base(o.base);
  const auto grid = make_q_grid(o.q_min, o.q_max, o.q_step);
  const auto table = spectrum_table(model, grid, base);
  const auto dim = dimension(model);  // NumericalError on cross-check failure
  const auto s2 = sigma2(model, model.is_ell_adic() || model.ln_ell() ? base : LogBase::natural);
  const auto profile = chi_profile(model, 1.0);

  std::vector<std::vector<std::string>> rows;
  for (const auto& [q, t] : table.points)
    rows.push_back({format_real(q), format_real(t), std::string(to_string(base)),
                    std::string(to_string(table.method))});
  ojson j;
  j["model"] = model.name();
  j["family"] = to_string(model.family());
  j["base"] = to_string(base);
  j["method"] = to_string(table.method);
  j["q_min"] = grid.front();
  j["q_max"] = grid.back();
  j["points"] = grid.size();
  j["d"] = dim.d;
  j["d_numeric"] = dim.d_numeric;
  j["d_method"] = dim.method;
  j["sigma2"] = json_real(s2.value);
  j["sigma2_err"] = json_real(s2.error);
  j["sigma2_base"] = to_string(s2.base);
  j["sigma2_method"] = s2.method;
  j["sigma2_flagged"] = s2.flagged;
  j["delta"] = support_dimension(model);
  j["flat"] = profile.flat;
  j["tau_min"] = std::min_element(table.points.begin(), table.points.end(),
                                  [](auto& a, auto& b) { return a.second < b.second; })->second;
  j["tau_max"] = std::max_element(table.points.begin(), table.points.end(),
                                  [](auto& a, auto& b) { return a.second < b.second; })->second;
  Emitter e(c, "spectrum", args, text);
  e.file("spectrum.csv", csv({"q", "tau", "base", "method"}, rows));
  e.file("spectrum.json", j.dump(2) + "\n");
  e.finish(out);
}

// lil-sim -----------------------------------------------------------------

struct LilOpts {
  std::uint64_t paths = 1000;
  std::string checkpoints = "2^4,2^5,2^6,2^7,2^8,2^9,2^10,2^11,2^12,2^13,2^14";
  std::string horizons;
  int window_lo = 16;
  std::string convention;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void cmd_lil_sim(const Common& c, const LilOpts& o, const std::vector<std::string>& args,
                 std::ostream& out) {
  const std::string text = read_file(c.model_path);
  const auto model = parse_model_spec(text, c.model_path);
  const auto conv = o.convention.empty() ? default_convention(model) : lil_convention(o.convention, model);
  EnsembleConfig cfg;
  cfg.paths = o.paths;
  cfg.checkpoints = parse_levels(o.checkpoints);
  require_floor(cfg.checkpoints);
  if (!o.horizons.empty()) {
    cfg.horizons = parse_levels(o.horizons);
    require_floor(cfg.horizons);
  }
  if (o.window_lo < kCheckpointFloor)
    throw ValidationError("window start below n_min = " + std::to_string(kCheckpointFloor));
  cfg.window_lo = o.window_lo;
  cfg.seed = c.seed;
  cfg.threads = resolve_threads(c.threads);
  const auto s = run_ensemble(model, cfg, conv);

  std::vector<std::vector<std::string>> rows;
  std::string dat = "# n mean_ratio\n";
  ojson cps = ojson::array();
  for (const auto& cp : s.checkpoints) {
    rows.push_back({std::to_string(cp.n), format_real(cp.mean_ratio), format_real(cp.min_ratio),
                    format_real(cp.max_ratio), format_real(cp.ks_distance)});
    dat += std::to_string(cp.n) + " " + format_real(cp.mean_ratio) + "\n";
    cps.push_back({{"n", cp.n},
                   {"mean_ratio", json_real(cp.mean_ratio)},
                   {"var_ratio", json_real(cp.var_ratio)},
                   {"min_ratio", json_real(cp.min_ratio)},
                   {"max_ratio", json_real(cp.max_ratio)},
                   {"mean_s", cp.mean_s},
                   {"mean_time", cp.mean_time},
                   {"ks_distance", json_real(cp.ks_distance)}});
  }
  ojson win = ojson::array();
  for (std::size_t h = 0; h < s.horizons.size(); ++h) {
    const auto& sup = s.window_sup_ratio[h];
    const auto& inf = s.window_inf_ratio[h];
    const auto& sq = s.window_sup_sqrt[h];
    ojson w{{"horizon", s.horizons[h]},
            {"median_sup_ratio", median(sup)},
            {"max_sup_ratio", *std::max_element(sup.begin(), sup.end())},
            {"min_inf_ratio", *std::min_element(inf.begin(), inf.end())}};
    for (int a : {1, 2, 3}) {
      const auto cnt = std::count_if(sq.begin(), sq.end(), [a](double x) { return x > a; });
      w["frac_sup_sqrt_gt_" + std::to_string(a)] = static_cast<double>(cnt) / sq.size();
    }
    win.push_back(w);
  }
  ojson j;
  j["model"] = model.name();
  j["convention"] = {{"name", conv.name},
                     {"s_base", to_string(conv.s_base)},
                     {"loglog_base", to_string(conv.loglog_base)},
                     {"n_min", conv.n_min()}};
  j["d"] = s.d;
  j["sigma"] = s.sigma;
  j["clt_sigma"] = s.clt_sigma;
  j["paths"] = s.paths;
  j["seed"] = s.seed;
  j["window_lo"] = cfg.window_lo;
  j["checkpoints"] = cps;
  j["window"] = win;
  Emitter e(c, "lil-sim", args, text);
  e.file("lil.csv", csv({"n", "mean_ratio", "min_ratio", "max_ratio", "ks_distance"}, rows));
  e.file("lil.json", j.dump(2) + "\n");
  e.file("ratio_vs_n.dat", dat);
  e.finish(out);
}

// gauge-test --------------------------------------------------------------

struct GaugeOpts {
  std::string family = "lil_hausdorff";
  double eps = 0.3;
  double a = 0.5;
  std::optional<double> d;
  std::string theta = "base2";
  std::string side;
  std::string checkpoints = "2^10,2^14,2^18";
  std::uint64_t paths = 10000;
};

void cmd_gauge_test(const Common& c, const GaugeOpts& o, const std::vector<std::string>& args,
                    std::ostream& out) {
  const std::string text = read_file(c.model_path);
  const auto model = parse_model_spec(text, c.model_path);
  const auto levels = parse_levels(o.checkpoints);
  require_floor(levels);
  const auto family = parse_gauge_family(o.family);
  const auto theta = parse_theta_convention(o.theta);
  const bool eps_family = family == GaugeFamily::lil_hausdorff || family == GaugeFamily::lil_packing;
  GaugeSpec spec = make_gauge(model, family, theta, eps_family ? o.eps : o.a);
  if (o.d) spec.d = *o.d;
  if (!o.side.empty()) {
    if (family == GaugeFamily::lil_packing) {
      if (o.side == "singular") spec.packing_side = PackingSide::singular;
      else if (o.side == "ac") spec.packing_side = PackingSide::ac;
      else throw ValidationError("--side for lil_packing: singular|ac");
    } else if (family == GaugeFamily::theta_a) {
      if (o.side == "positive") spec.theta_side = ChiSide::positive;
      else if (o.side == "negative") spec.theta_side = ChiSide::negative;
      else throw ValidationError("--side for theta_a: positive|negative");
    } else {
      throw ValidationError("--side applies to lil_packing and theta_a only");
    }
  }
  const auto r = mass_gauge_fraction(model, spec, levels, o.paths, c.seed, resolve_threads(c.threads));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < levels.size(); ++j)
    rows.push_back({std::to_string(levels[j]), format_real(r.fraction[j]), format_real(r.hit_ever[j])});
  ojson j;
  j["model"] = model.name();
  j["family"] = to_string(family);
  j["theta"] = to_string(theta);
  j["d"] = spec.d;
  j["sigma"] = spec.sigma;
  if (eps_family) j["eps"] = spec.eps;
  else if (family != GaugeFamily::power) j["a"] = spec.a;
  if (family == GaugeFamily::lil_packing)
    j["side"] = spec.packing_side == PackingSide::singular ? "singular" : "ac";
  if (family == GaugeFamily::theta_a)
    j["side"] = spec.theta_side == ChiSide::positive ? "positive" : "negative";
  j["paths"] = r.paths;
  j["seed"] = c.seed;
  j["levels"] = levels;
  j["fraction"] = r.fraction;
  j["hit_ever"] = r.hit_ever;
  j["hit_ever_fraction"] = r.hit_ever_fraction;
  Emitter e(c, "gauge-test", args, text);
  e.file("gauge.csv", csv({"n", "fraction", "hit_ever_fraction"}, rows));
  e.file("gauge.json", j.dump(2) + "\n");
  e.finish(out);
}

// qb-check ----------------------------------------------------------------

struct QbOpts {
  int max_level = 8;
  int random_level = 16;
  int random_pairs = 4096;
  std::string q_list = "-1,0.5,2";
  std::string n_list = "6,10,14";
};

ojson dichotomy_json(const DichotomyResult& r) {
  ojson ev;
  ev["tol"] = r.tol;
  if (r.log_ratio_range) {
    ev["log_ratio_min"] = r.log_ratio_range->first;
    ev["log_ratio_max"] = r.log_ratio_range->second;
    ev["ratio_levels"] = r.ratio_levels;
  }
  if (r.not_flat_positive) {
    ev["chi_plus_one"] = r.chi_plus_one;
    ev["chi_minus_one"] = r.chi_minus_one;
    ev["not_flat_positive"] = not_flat_json(*r.not_flat_positive);
    ev["not_flat_negative"] = not_flat_json(*r.not_flat_negative);
  }
  if (!r.witnesses.empty()) ev["witnesses"] = r.witnesses;
  if (!r.reason.empty()) ev["reason"] = r.reason;
  if (!r.statement.empty()) ev["statement"] = r.statement;
  return ev;
}

void cmd_qb_check(const Common& c, const QbOpts& o, const std::vector<std::string>& args,
                  std::ostream& out) {
  const std::string text = read_file(c.model_path);
  const auto model = parse_model_spec(text, c.model_path);
  const auto budget = enumeration_budget();
  ojson j;
  j["model"] = model.name();
  if (model.is_ell_adic()) {
    const auto qb = qb_constant(model, o.max_level, o.random_level, o.random_pairs, c.seed, budget);
    j["C_hat"] = qb.C_hat;
    j["exact"] = qb.exact;
    if (qb.C_exact) j["C_exact"] = *qb.C_exact;
    j["max_level"] = qb.max_level;
    j["random_level"] = qb.random_level;
    j["by_level"] = qb.by_level;
  } else {
    j["C_hat"] = 1.0;  // self-similar measures are products on the symbolic side
    j["exact"] = true;
    j["C_exact"] = 1.0;
  }
  const auto dich = dichotomy_classify(model);
  j["case"] = to_string(dich.verdict);
  j["d"] = dich.d;
  j["delta"] = dich.delta;
  j["evidence"] = dichotomy_json(dich);
  if (model.is_ell_adic()) {
    const auto br = partition_bound_check(model, parse_reals(o.q_list), parse_levels(o.n_list),
                                          j["C_hat"].get<double>(), 0.0, budget);
    ojson rows = ojson::array();
    for (const auto& row : br.rows)
      rows.push_back({{"q", row.q}, {"n", row.n}, {"log_z", row.log_z}, {"n_tau", row.n_tau},
                      {"deviation", row.deviation}, {"bound", row.bound}, {"slack", row.slack},
                      {"holds", row.holds}, {"method", row.method}});
    j["bound"] = {{"C", br.C}, {"all_hold", br.all_hold}, {"worst_slack", br.worst_slack},
                  {"rows", rows}};
  }
  Emitter e(c, "qb-check", args, text);
  e.file("qb.json", j.dump(2) + "\n");
  e.finish(out);
}

// oracles (hidden) ----------------------------------------------------------

int cmd_oracles(const std::string& dir, std::ostream& out) {
  const auto records = build_oracles();
  write_output(dir, kOracleCacheFile, oracles_to_json(records));
  int failures = 0;
  for (const auto& c : cross_check(records)) {
    out << (c.pass ? "ok   " : "FAIL ") << c.name << " main=" << format_real(c.main_value)
        << " oracle=" << format_real(c.oracle_value) << "\n";
    failures += !c.pass;
  }
  return failures ? static_cast<int>(ExitCode::numerical) : 0;
}

// replay --------------------------------------------------------------------

std::vector<std::string> override_arg(std::vector<std::string> args, const std::string& flag,
                                      const std::string& value) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) {
      args[i + 1] = value;
      return args;
    }
    if (args[i].rfind(flag + "=", 0) == 0) {
      args[i] = flag + "=" + value;
      return args;
    }
  }
  args.push_back(flag);
  args.push_back(value);
  return args;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_dir,
               std::optional<unsigned> threads, std::ostream& out, std::ostream& err) {
  const auto m = manifest_from_json(read_file(manifest_path));
  if (sha256_hex(m.model_text) != m.model_digest)
    throw ValidationError("manifest: model_text does not match model_digest");
  const std::string dir =
      out_dir.empty() ? (std::filesystem::path(manifest_path).parent_path() / "replay").string() : out_dir;
  const auto model_file = std::filesystem::path(dir) / "replay.model";
  write_output(dir, model_file.filename().string(), m.model_text);
  auto args = override_arg(m.args, "--model", model_file.string());
  args = override_arg(args, "--out", dir);
  if (threads) args = override_arg(args, "--threads", std::to_string(*threads));
  std::ostringstream sink;
  const int code = run_cli(args, sink, err);
  if (code != 0) return code;
  int mismatches = 0;
  for (const auto& [name, digest] : m.outputs) {
    const auto path = std::filesystem::path(dir) / name;
    const std::string now = std::filesystem::exists(path) ? sha256_hex(read_file(path.string())) : "missing";
    const bool same = now == digest;
    out << (same ? "identical " : "DIFFERS   ") << name << "\n";
    mismatches += !same;
  }
  return mismatches ? static_cast<int>(ExitCode::numerical) : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mflab: multifractal spectra, LIL ensembles and gauge tests for self-similar and quasi-Bernoulli measures"};
  app.footer(kEnvHelp);
  app.set_version_flag("--version", std::string("mflab ") + MFLAB_VERSION);
  app.require_subcommand(1);

  Common common;
  SpectrumOpts so;
  auto* sp = app.add_subcommand("spectrum", "L^q spectrum table, dimension and sigma^2");
  add_common(sp, common);
  sp->add_option("--q-min", so.q_min)->capture_default_str();
  sp->add_option("--q-max", so.q_max)->capture_default_str();
  sp->add_option("--q-step", so.q_step)->capture_default_str();
  sp->add_option("--base", so.base, "ell | natural | 2 (default: ell, natural for IFS)");

  LilOpts lo;
  auto* ls = app.add_subcommand("lil-sim", "Monte Carlo LIL ratio ensemble");
  add_common(ls, common);
  ls->add_option("--paths,-N", lo.paths)->capture_default_str();
  ls->add_option("--checkpoints", lo.checkpoints, "comma list of levels (n or 2^k), >= 16")->capture_default_str();
  ls->add_option("--horizons", lo.horizons, "window ends for running sup/inf");
  ls->add_option("--window-lo", lo.window_lo)->capture_default_str();
  ls->add_option("--convention", lo.convention, "classical | quasi_bernoulli | self_similar");

  GaugeOpts go;
  auto* gt = app.add_subcommand("gauge-test", "fraction of paths with m(I_n) <= Psi(|I_n|)");
  add_common(gt, common);
  gt->add_option("--family", go.family, "lil_hausdorff | lil_packing | sqrt_a | theta_a | power")->capture_default_str();
  gt->add_option("--eps", go.eps)->capture_default_str();
  gt->add_option("--a", go.a)->capture_default_str();
  gt->add_option("--d", go.d, "override the exponent d (power family: t^d)");
  gt->add_option("--theta", go.theta, "base2 | natural | base_ell")->capture_default_str();
  gt->add_option("--side", go.side, "lil_packing: singular | ac; theta_a: positive | negative");
  gt->add_option("--checkpoints", go.checkpoints)->capture_default_str();
  gt->add_option("--paths,-N", go.paths)->capture_default_str();

  QbOpts qo;
  auto* qb = app.add_subcommand("qb-check", "quasi-Bernoulli constant, partition bound, dichotomy");
  add_common(qb, common);
  qb->add_option("--max-level", qo.max_level)->capture_default_str();
  qb->add_option("--random-level", qo.random_level)->capture_default_str();
  qb->add_option("--random-pairs", qo.random_pairs)->capture_default_str();
  qb->add_option("--q-list", qo.q_list)->capture_default_str();
  qb->add_option("--n-list", qo.n_list)->capture_default_str();

  std::string oracle_dir = ".";
  auto* orc = app.add_subcommand("oracles", "regenerate the oracle cache");
  orc->group("");
  orc->add_option("--out", oracle_dir);

  std::string manifest_path, replay_out;
  std::optional<unsigned> replay_threads;
  auto* rp = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  rp->add_option("manifest", manifest_path)->required();
  rp->add_option("--out", replay_out, "output directory (default: <manifest dir>/replay)");
  rp->add_option("--threads", replay_threads);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }
  try {
    if (*sp) cmd_spectrum(common, so, args, out);
    else if (*ls) cmd_lil_sim(common, lo, args, out);
    else if (*gt) cmd_gauge_test(common, go, args, out);
    else if (*qb) cmd_qb_check(common, qo, args, out);
    else if (*orc) return cmd_oracles(oracle_dir, out);
    else if (*rp) return cmd_replay(manifest_path, replay_out, replay_threads, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numerical);
  }
  return 0;
}

}  // namespace mflab

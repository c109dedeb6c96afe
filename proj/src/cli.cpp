#include "auctionval/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "auctionval/bands.hpp"
#include "auctionval/distribution.hpp"
#include "auctionval/error.hpp"
#include "auctionval/format.hpp"
#include "auctionval/ingest.hpp"
#include "auctionval/lambda.hpp"
#include "auctionval/metrics.hpp"
#include "auctionval/pipeline.hpp"
#include "auctionval/plot.hpp"
#include "auctionval/simulate.hpp"

namespace auctionval {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines turned into "--key value" arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (value == "false") continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

// Config arguments go right after the subcommand so that later command-line
// flags override them.
std::vector<std::string> expand_args(int argc, const char* const* argv) {
  std::vector<std::string> user(argv + 1, argv + argc);
  std::vector<std::string> config;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < user.size(); ++i) {
    if (user[i] == "--config") {
      if (i + 1 >= user.size()) throw CLI::ArgumentMismatch("--config needs a file");
      auto c = read_config(user[++i]);
      config.insert(config.end(), c.begin(), c.end());
    } else if (user[i].rfind("--config=", 0) == 0) {
      auto c = read_config(user[i].substr(9));
      config.insert(config.end(), c.begin(), c.end());
    } else {
      rest.push_back(user[i]);
    }
  }
  std::vector<std::string> args{argc > 0 ? argv[0] : "auctionval"};
  if (!rest.empty()) {
    args.push_back(rest.front());
    args.insert(args.end(), config.begin(), config.end());
    args.insert(args.end(), rest.begin() + 1, rest.end());
  } else {
    args.insert(args.end(), config.begin(), config.end());
  }
  return args;
}

std::vector<std::string> resolved_config(const CLI::App& app) {
  std::vector<std::string> lines{"command=" + app.get_name()};
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help" || name == "help-all" || name.empty()) continue;
    std::string value;
    if (opt->get_type_size_max() == 0) {
      value = opt->count() ? "true" : "false";
    } else if (opt->count()) {
      for (const auto& r : opt->reduced_results()) value += (value.empty() ? "" : ";") + r;
    } else {
      value = opt->get_default_str();
    }
    lines.push_back(name + "=" + value);
  }
  return lines;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      out_ = file_.get();
    }
  }
  ~Sink() noexcept(false) {
    if (file_) {
      file_->close();
      if (!*file_ && std::uncaught_exceptions() == 0) throw IoError("write failed");
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void comments(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << "\n";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(trim(line.substr(1)));
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
    if (t.header.empty()) {
      t.header = fields;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ValidationError(path + " line " + std::to_string(lineno) + ": wrong number of fields");
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], row[j])) {
        throw ValidationError(path + " line " + std::to_string(lineno) + ": cannot parse '" + fields[j] + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ValidationError(path + ": no header row");
  return t;
}

// Curves file: x followed by one column per estimate, all piecewise linear.
std::vector<std::pair<std::string, MonotoneCurve>> read_curves(const std::string& path) {
  const Table t = read_table(path);
  if (t.header.size() < 2 || t.header[0] != "x") throw ValidationError(path + ": expected columns x,<curve>,...");
  std::vector<double> x;
  for (const auto& r : t.rows) x.push_back(r[0]);
  std::vector<std::pair<std::string, MonotoneCurve>> out;
  for (std::size_t j = 1; j < t.header.size(); ++j) {
    std::vector<double> y;
    for (const auto& r : t.rows) y.push_back(r[j]);
    out.emplace_back(t.header[j], MonotoneCurve(x, y, CurveKind::PiecewiseLinear));
  }
  return out;
}

ConfidenceBand read_band(const std::string& path) {
  const Table t = read_table(path);
  const std::vector<std::string> want{"x", "lower", "upper", "estimate"};
  if (t.header != want) throw ValidationError(path + ": expected columns x,lower,upper,estimate");
  ConfidenceBand b;
  for (const auto& r : t.rows) {
    b.knots.push_back(r[0]);
    b.lower.push_back(r[1]);
    b.upper.push_back(r[2]);
    b.estimate.push_back(r[3]);
  }
  return b;
}

ReservePolicy parse_reserve(const std::string& text) {
  double v;
  if (parse_double(text, v)) return v;
  if (text.rfind("list:", 0) == 0) {
    std::vector<double> xs;
    std::stringstream ss(text.substr(5));
    for (std::string f; std::getline(ss, f, ',');) {
      if (!parse_double(f, v)) throw ValidationError("bad reserve list entry '" + f + "'");
      xs.push_back(v);
    }
    return xs;
  }
  return ValuationDistribution::parse(text);
}

const std::map<std::string, std::string>& named_settings() {
  static const std::map<std::string, std::string> m{{"uniform", "uniform:1,20"},
                                                    {"pwuniform", "pwuniform:1,2,0.5,3,4,0.5"},
                                                    {"pareto", "pareto:3,100"},
                                                    {"gamma", "gamma:10,2"},
                                                    {"beta", "beta:2,2"}};
  return m;
}

// "uniform:100" (named family and K) or "<distribution spec>@K".
StudySetting parse_setting(const std::string& text) {
  std::string spec, k;
  if (auto at = text.rfind('@'); at != std::string::npos) {
    spec = text.substr(0, at);
    k = text.substr(at + 1);
  } else {
    const auto colon = text.find(':');
    const auto it = named_settings().find(text.substr(0, colon));
    if (colon == std::string::npos || it == named_settings().end()) {
      throw ValidationError("setting '" + text + "': expected <family>:<K> or <spec>@<K>");
    }
    spec = it->second;
    k = text.substr(colon + 1);
  }
  double kv;
  if (!parse_double(k, kv) || kv < 1 || kv != static_cast<double>(static_cast<std::size_t>(kv))) {
    throw ValidationError("setting '" + text + "': bad K");
  }
  StudySetting s{text, ValuationDistribution::parse(spec)};
  s.K = static_cast<std::size_t>(kv);
  return s;
}

double parse_split(const std::string& text) {
  double a, b;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    if (!parse_double(text.substr(0, colon), a) || !parse_double(text.substr(colon + 1), b) || a <= 0 || b < 0) {
      throw ValidationError("bad split '" + text + "'");
    }
    return a / (a + b);
  }
  if (!parse_double(text, a)) throw ValidationError("bad split '" + text + "'");
  return a;
}

struct GOptions {
  std::size_t reps = kDefaultGReps;
  std::uint64_t seed = 0;
  std::string cache;
};

void add_g_options(CLI::App* sub, GOptions& g) {
  sub->add_option("--g-reps", g.reps, "Monte Carlo draws behind the g table");
  sub->add_option("--g-seed", g.seed, "seed of the g table");
  sub->add_option("--g-cache", g.cache, "g table cache file");
}

std::unique_ptr<GFunction> make_g(const GOptions& g) {
  std::optional<std::filesystem::path> cache;
  if (!g.cache.empty()) cache = g.cache;
  return std::make_unique<GFunction>(g.reps, g.seed, 5.0, cache);
}

struct FitFlags {
  double q = 0.25;
  double epsilon = 0.0;
  double threshold = 0.0;
  double tol = 1e-8;
  std::size_t max_sweeps = 10000;
  bool unconstrained = false;

  FitOptions options() const {
    FitOptions o;
    o.q = q;
    if (epsilon > 0.0) o.epsilon = epsilon;
    if (threshold > 0.0) o.reserve_threshold = threshold;
    o.tol = tol;
    o.max_sweeps = max_sweeps;
    o.unconstrained_too = unconstrained;
    return o;
  }
};

void add_fit_options(CLI::App* sub, FitFlags& f) {
  sub->add_option("--q", f.q, "fraction of auctions in the low-reserve window");
  sub->add_option("--epsilon", f.epsilon, "half-width of the low-reserve window (0: default rule)");
  sub->add_option("--reserve-threshold", f.threshold, "use reserves below this value as the low-reserve set");
  sub->add_option("--tol", f.tol, "ascent stopping tolerance");
  sub->add_option("--max-sweeps", f.max_sweeps, "ascent sweep limit");
}

std::vector<double> union_knots(std::initializer_list<const MonotoneCurve*> curves) {
  std::vector<double> x;
  for (const auto* c : curves) x.insert(x.end(), c->knots().begin(), c->knots().end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Valuation distribution estimation from auction standing prices", "auctionval"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
  app.footer("Every command also accepts --config FILE with key=value lines.");

  std::uint64_t seed = 0;
  std::string out_path;
  GOptions gopt;
  FitFlags fit_flags;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a dataset of auctions");
  std::string dist_spec, reserve_text = "0", trace_path;
  SimConfig sim_config;
  sim->add_option("--dist", dist_spec, "valuation distribution, e.g. uniform:1,20")->required();
  sim->add_option("--K", sim_config.K, "number of auctions");
  sim->add_option("--lambda", sim_config.lambda, "bidder arrival rate");
  sim->add_option("--tau", sim_config.tau, "auction duration");
  sim->add_option("--reserve", reserve_text, "constant, distribution spec, or list:r1,r2,...");
  sim->add_option("--tie-jitter", sim_config.tie_jitter, "noise width used to break reserve ties");
  sim->add_option("--trace", trace_path, "also write the full bid log here");

  // estimate
  auto* est = app.add_subcommand("estimate", "Fit the initial estimate and the constrained MLE");
  std::string data_path, json_path;
  est->add_option("--data", data_path, "canonical dataset file")->required();
  est->add_option("--json", json_path, "diagnostics file (default: a comment line in the output)");
  est->add_flag("--unconstrained", fit_flags.unconstrained, "also report the unconstrained MLE");
  add_fit_options(est, fit_flags);
  add_g_options(est, gopt);

  // bands
  auto* bnd = app.add_subcommand("bands", "HulC confidence band for one estimator");
  std::string kind_text = "cmle";
  double alpha = 0.10, delta = 0.0;
  std::size_t bias_reps = 0, batches = 0;
  bnd->add_option("--data", data_path, "canonical dataset file")->required();
  bnd->add_option("--kind", kind_text, "init or cmle");
  bnd->add_option("--alpha", alpha, "miscoverage level");
  bnd->add_option("--delta", delta, "median bias of the estimator");
  bnd->add_option("--bias-reps", bias_reps, "estimate delta from this many simulated datasets (0: use --delta)");
  bnd->add_option("--batches", batches, "override the number of batches");
  add_fit_options(bnd, fit_flags);
  add_g_options(bnd, gopt);

  // metrics
  auto* met = app.add_subcommand("metrics", "Distances between curves, or a train/test evaluation");
  std::string curves_path, truth_spec, split_text = "1:1";
  std::size_t reps = 100;
  met->add_option("--curves", curves_path, "curves file from estimate");
  met->add_option("--dist", truth_spec, "true distribution to compare against");
  met->add_option("--data", data_path, "dataset for the train/test evaluation");
  met->add_option("--split", split_text, "train:test ratio or train fraction");
  met->add_option("--reps", reps, "train/test replications");
  add_fit_options(met, fit_flags);
  add_g_options(met, gopt);

  // replicate
  auto* rep = app.add_subcommand("replicate", "Simulation study: mean KS and TV per setting");
  std::vector<std::string> settings;
  std::string raw_path;
  double rep_lambda = 1.0, rep_tau = 100.0;
  std::string rep_reserve = "0";
  rep->add_option("--setting", settings, "uniform:100, gamma:1000, or <spec>@<K>; repeatable")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  rep->add_option("--reps", reps, "replicates per setting");
  rep->add_option("--lambda", rep_lambda, "bidder arrival rate");
  rep->add_option("--tau", rep_tau, "auction duration");
  rep->add_option("--reserve", rep_reserve, "reserve policy as in simulate");
  rep->add_option("--raw", raw_path, "per-replicate rows");
  add_fit_options(rep, fit_flags);
  add_g_options(rep, gopt);

  // ingest
  auto* ing = app.add_subcommand("ingest", "Clean a bid log into a canonical dataset");
  std::string input_path, report_path;
  IngestOptions ingest_opts;
  ing->add_option("input,--input", input_path, "bid log CSV")->required();
  ing->add_option("--duration", ingest_opts.duration, "auction duration in the bidtime unit");
  ing->add_option("--noise", ingest_opts.noise, "width of the uniform noise added to bids");
  ing->add_option("--reserve-jitter", ingest_opts.reserve_jitter, "width of the noise added to shared openbids");
  ing->add_option("--report", report_path, "cleaning report file");

  // plot
  auto* plt = app.add_subcommand("plot", "Plot-ready long CSV and optional SVG");
  std::vector<std::string> band_paths;
  std::string svg_path, title;
  plt->add_option("--curves", curves_path, "curves file from estimate")->required();
  plt->add_option("--band", band_paths, "band file from bands; repeatable")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  plt->add_option("--dist", truth_spec, "add the true CDF on the curve grid");
  plt->add_option("--svg", svg_path, "SVG output");
  plt->add_option("--title", title, "chart title");

  for (auto* sub : {sim, est, bnd, met, rep, ing, plt}) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out_path, "output file (default stdout)");
  }

  try {
    std::vector<std::string> args = expand_args(argc, argv);
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "config: " << e.what() << "\n";
    return kExitIo;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  const std::vector<std::string> provenance = resolved_config(*cmd);

  try {
    if (cmd == sim) {
      sim_config.seed = seed;
      sim_config.reserve = parse_reserve(reserve_text);
      const auto dist = ValuationDistribution::parse(dist_spec);
      std::vector<BidTrace> traces;
      const ObservedDataset ds = run_study(sim_config, dist, trace_path.empty() ? nullptr : &traces);
      {
        Sink s(out_path, out);
        export_dataset(ds, *s, provenance);
      }
      if (!trace_path.empty()) {
        Sink s(trace_path, out);
        write_bid_trace(traces, ds, *s);
      }
    } else if (cmd == est) {
      const ObservedDataset ds = import_dataset(std::filesystem::path(data_path));
      auto g = make_g(gopt);
      const FitResult fr = fit(ds, *g, fit_flags.options());
      std::vector<double> x = fr.f_mle ? union_knots({&fr.initial.continuous, &fr.f_cmle, &*fr.f_mle})
                                       : union_knots({&fr.initial.continuous, &fr.f_cmle});
      nlohmann::json j;
      j["lambda_hat"] = fr.lambda_hat;
      j["r_min"] = fr.selection.r_min;
      j["epsilon"] = fr.selection.epsilon;
      j["low_reserve_count"] = fr.selection.V.size();
      j["K"] = ds.size();
      j["ell"] = fr.pooled.ell();
      j["n"] = fr.pooled.size();
      j["sweeps"] = fr.run.sweeps;
      j["converged"] = fr.run.converged;
      j["objective"] = fr.run.objective;
      j["frozen"] = fr.run.frozen;
      j["splice"] = {{"p1", fr.initial.anchors.p1},
                     {"p2", fr.initial.anchors.p2},
                     {"c", fr.initial.anchors.c},
                     {"c_value", fr.initial.anchors.c_value}};
      j["ks_init_cmle"] = ks_distance(fr.initial.continuous, fr.f_cmle);
      j["tv_init_cmle"] = tv_distance(fr.initial.continuous, fr.f_cmle);
      if (fr.run_unconstrained) {
        j["unconstrained"] = {{"sweeps", fr.run_unconstrained->sweeps},
                              {"converged", fr.run_unconstrained->converged},
                              {"objective", fr.run_unconstrained->objective}};
      }
      {
        Sink s(out_path, out);
        comments(*s, provenance);
        if (json_path.empty()) *s << "# diagnostics " << j.dump() << "\n";
        *s << "x,init,cmle" << (fr.f_mle ? ",mle" : "") << "\n";
        for (double xi : x) {
          *s << format_double(xi) << "," << format_double(fr.initial.continuous(xi)) << ","
             << format_double(fr.f_cmle(xi));
          if (fr.f_mle) *s << "," << format_double((*fr.f_mle)(xi));
          *s << "\n";
        }
      }
      if (!json_path.empty()) {
        Sink s(json_path, out);
        j["config"] = provenance;
        *s << j.dump(2) << "\n";
      }
    } else if (cmd == bnd) {
      const ObservedDataset ds = import_dataset(std::filesystem::path(data_path));
      auto g = make_g(gopt);
      const EstimatorKind kind = parse_estimator_kind(kind_text);
      const FitOptions fo = fit_flags.options();
      std::vector<std::string> notes = provenance;
      double d = delta;
      if (bias_reps > 0) {
        const FitResult fr = fit(ds, *g, fo);
        const auto reserves = transformed_reserves(ds, fr.selection, estimate_of(fr, kind));
        const auto mb = estimate_median_bias(kind, fr.lambda_hat, ds.tau, reserves, bias_reps, seed, *g, fo);
        d = mb.delta;
        notes.push_back("median_bias_failed_reps=" + std::to_string(mb.failed));
      }
      const std::size_t B = batches ? batches : hulc_batches(alpha, d);
      const ConfidenceBand band = hulc_band_batches(ds, kind, B, *g, fo, seed, alpha);
      notes.push_back("kind=" + to_string(kind));
      notes.push_back("delta=" + format_double(d));
      notes.push_back("batches=" + std::to_string(B));
      Sink s(out_path, out);
      comments(*s, notes);
      *s << "x,lower,upper,estimate\n";
      for (std::size_t i = 0; i < band.knots.size(); ++i) {
        *s << format_double(band.knots[i]) << "," << format_double(band.lower[i]) << ","
           << format_double(band.upper[i]) << "," << format_double(band.estimate[i]) << "\n";
      }
    } else if (cmd == met) {
      if (curves_path.empty() == data_path.empty()) {
        err << "metrics: give exactly one of --curves or --data\n";
        return kExitUsage;
      }
      Sink s(out_path, out);
      comments(*s, provenance);
      if (!curves_path.empty()) {
        const auto curves = read_curves(curves_path);
        *s << "a,b,ks,tv\n";
        for (std::size_t i = 0; i < curves.size(); ++i) {
          for (std::size_t k = i + 1; k < curves.size(); ++k) {
            *s << curves[i].first << "," << curves[k].first << ","
               << format_double(ks_distance(curves[i].second, curves[k].second)) << ","
               << format_double(tv_distance(curves[i].second, curves[k].second)) << "\n";
          }
        }
        if (!truth_spec.empty()) {
          const auto truth = ValuationDistribution::parse(truth_spec);
          for (const auto& [n, c] : curves) {
            *s << n << ",truth," << format_double(ks_distance(c, truth)) << ","
               << format_double(tv_distance(c, truth)) << "\n";
          }
        }
      } else {
        const ObservedDataset ds = import_dataset(std::filesystem::path(data_path));
        auto g = make_g(gopt);
        const TrainTestReport r = train_test_eval(ds, parse_split(split_text), reps, seed, *g, fit_flags.options());
        *s << "split,train_fraction,replications,skipped,avg_tv_init,avg_tv_mle\n"
           << split_text << "," << format_double(r.train_fraction) << "," << r.replications << "," << r.skipped
           << "," << format_double(r.avg_tv_init) << "," << format_double(r.avg_tv_mle) << "\n";
      }
    } else if (cmd == rep) {
      std::vector<StudySetting> st;
      for (const auto& text : settings) {
        StudySetting one = parse_setting(text);
        one.lambda = rep_lambda;
        one.tau = rep_tau;
        one.reserve = parse_reserve(rep_reserve);
        st.push_back(std::move(one));
      }
      auto g = make_g(gopt);
      const auto reports = replicate_table(st, reps, seed, *g, fit_flags.options());
      {
        Sink s(out_path, out);
        comments(*s, provenance);
        *s << "setting,replicates,failed,ks_mle,ks_init,tv_mle,tv_init,tv_mle_binned,tv_init_binned\n";
        for (const auto& r : reports) {
          *s << r.label << "," << r.replicates << "," << r.failed << "," << format_double(r.ks_mle) << ","
             << format_double(r.ks_init) << "," << format_double(r.tv_mle) << "," << format_double(r.tv_init) << ","
             << format_double(r.tv_mle_binned) << "," << format_double(r.tv_init_binned) << "\n";
          for (const auto& e : r.errors) err << r.label << ": " << e << "\n";
        }
      }
      if (!raw_path.empty()) {
        Sink s(raw_path, out);
        comments(*s, provenance);
        *s << "setting,replicate,seed,lambda_hat,ks_mle,ks_init,tv_mle,tv_init,tv_mle_binned,tv_init_binned\n";
        for (const auto& r : reports) {
          for (const auto& x : r.raw) {
            *s << r.label << "," << x.replicate << "," << x.seed << "," << format_double(x.lambda_hat) << ","
               << format_double(x.ks_mle) << "," << format_double(x.ks_init) << "," << format_double(x.tv_mle)
               << "," << format_double(x.tv_init) << "," << format_double(x.tv_mle_binned) << ","
               << format_double(x.tv_init_binned) << "\n";
          }
        }
      }
    } else if (cmd == ing) {
      ingest_opts.seed = seed;
      const IngestResult res = ingest_bid_csv(input_path, ingest_opts);
      std::ostringstream report;
      write_report(res.report, report);
      std::vector<std::string> notes = provenance;
      std::istringstream lines(report.str());
      for (std::string l; std::getline(lines, l);) notes.push_back(l.rfind("# ", 0) == 0 ? l.substr(2) : l);
      {
        Sink s(out_path, out);
        export_dataset(res.dataset, *s, notes);
      }
      if (!report_path.empty()) {
        Sink s(report_path, out);
        *s << report.str();
      } else {
        err << report.str();
      }
    } else if (cmd == plt) {
      auto curves = read_curves(curves_path);
      if (!truth_spec.empty()) {
        const auto truth = ValuationDistribution::parse(truth_spec);
        std::vector<double> x = curves.front().second.knots(), y;
        for (double xi : x) y.push_back(truth.cdf(xi));
        curves.emplace_back("truth", MonotoneCurve(x, y, CurveKind::PiecewiseLinear));
      }
      std::vector<std::pair<std::string, ConfidenceBand>> bands;
      for (const auto& p : band_paths) bands.emplace_back(std::filesystem::path(p).stem().string(), read_band(p));
      const auto series = plot_series(curves, bands);
      {
        Sink s(out_path, out);
        write_plot_csv(series, *s, provenance);
      }
      if (!svg_path.empty()) {
        Sink s(svg_path, out);
        write_plot_svg(series, *s, title);
      }
    }
  } catch (const ValidationError& e) {
    err << name << ": invalid input: " << e.what() << "\n";
    if (e.violations().size() > 1) {
      for (const auto& v : e.violations()) err << "  " << v << "\n";
    }
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << name << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << name << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}

}  // namespace auctionval

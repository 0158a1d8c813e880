#include "relaymix/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include "relaymix/closedform.hpp"
#include "relaymix/errors.hpp"
#include "relaymix/laplace.hpp"
#include "relaymix/mcengine.hpp"
#include "relaymix/netmodel.hpp"

namespace relaymix {

namespace {

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigParseError("not a number: '" + text + "'");
  return v;
}

McScheme scheme_of(const std::string& name) {
  if (name == "mixed") return McScheme::Mixed;
  if (name == "direct") return McScheme::DirectOnly;
  if (name == "relay") return McScheme::RelayAlways;
  throw ValidationError("unknown scheme '" + name +
                        "' (expected mixed, direct or relay)");
}

ActivationRule rule_of(const std::string& name) {
  if (name == "bernoulli") return ActivationRule::Bernoulli;
  if (name == "sr-threshold") return ActivationRule::SourceRelayThreshold;
  if (name == "rd-threshold") return ActivationRule::RelayDestThreshold;
  throw ValidationError("unknown activation rule '" + name +
                        "' (expected bernoulli, sr-threshold or "
                        "rd-threshold)");
}

ThresholdFieldRule field_rule_of(const std::string& name) {
  if (name == "field") return ThresholdFieldRule::FieldConsistent;
  if (name == "marginal") return ThresholdFieldRule::MarginalProbability;
  throw ValidationError("unknown field rule '" + name +
                        "' (expected field or marginal)");
}

McOptions mc_options(const RunConfig& cfg) {
  McOptions o;
  o.realizations = cfg.realizations;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  o.far_field = cfg.far_field;
  o.window_radius = cfg.window_radius;
  o.activation = rule_of(cfg.rule);
  o.field_rule = field_rule_of(cfg.field_rule);
  o.threshold_value = cfg.threshold;
  return o;
}

// Single-configuration command bodies; each returns the output columns and
// one row. Sweeps wrap these.
ResultTable run_once(const std::string& command, const RunConfig& cfg) {
  const NetworkParams& p = cfg.params;
  if (command == "dt-op") {
    return {{"op_dt"}, {{op_dt(p)}}};
  }
  if (command == "bound") {
    return {{"op_bound"}, {{op_mix_upper_bound(p, p.p_r).value}}};
  }
  if (command == "exact-op") {
    ExactOutageOptions o;
    o.r_samples = cfg.r_samples;
    o.seed = cfg.seed;
    const auto r = op_mix_exact(p, p.p_r, o);
    return {{"op_exact", "op_exact_stderr", "direct_fail", "relay_fail"},
            {{r.value, r.std_error, r.direct_fail, r.relay_fail}}};
  }
  if (command == "mc") {
    const auto r = estimate_op(p, scheme_of(cfg.scheme), mc_options(cfg));
    return {{"op_mc", "op_mc_stderr", "activation_prob", "window_radius"},
            {{r.outage_prob, r.std_error, r.activation_prob,
              r.window_radius}}};
  }
  if (command == "sigma-c") {
    const auto s = sigma_c(p);
    return {{"sigma_c", "sigma_c_closed"}, {{s.root, s.closed_bound}}};
  }
  if (command == "sigma-t") {
    const auto s = sigma_t(p);
    return {{"sigma_t", "sigma_t_closed"}, {{s.root, s.closed_bound}}};
  }
  if (command == "decide") {
    const auto a = activation_decision(p);
    return {{"use_relay", "gain_ratio", "sigma_in", "sigma_c", "sigma_t"},
            {{static_cast<double>(a.decided_p_r), a.gain_ratio, a.sigma_in,
              a.concavity.root, a.threshold.root}}};
  }
  if (command == "gain") {
    return {{"gain_ratio"}, {{op_gain_ratio(p)}}};
  }
  if (command == "opt-phi") {
    const auto r = optimize_phi0(p);
    return {{"phi0_star", "ratio_at_star"}, {{r.phi0_star, r.ratio_at_star}}};
  }
  if (command == "max-rate") {
    return {{"max_rate_dt", "max_rate_mix"},
            {{max_rate_for_op(p, cfg.op_target, RateScheme::Dt),
              max_rate_for_op(p, cfg.op_target, RateScheme::Mix)}}};
  }
  throw ValidationError("unknown command '" + command + "'");
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
  return g;
}

// Outage curves over the relaying probability at two scatter widths
// bracketing the on/off transition, bound against simulation.
ResultTable figure_activation_curves(const RunConfig& cfg) {
  NetworkParams base;  // defaults pin the recipe's operating point
  const double st = sigma_t(base).root;
  const auto grid = linear_grid(0.0, 1.0, 21);
  ResultTable t;
  t.columns = {"sigma_in", "p_r", "op_bound", "op_mc", "op_mc_stderr"};
  for (double mult : {0.5, 2.0}) {
    NetworkParams q = base;
    const double sig = mult * st;
    q.lambda_in = lambda_in_of_sigma(sig);
    McOptions o;
    o.realizations = cfg.realizations;
    o.seed = cfg.seed;
    o.workers = cfg.workers;
    const auto curve = estimate_op_curve(q, grid, McScheme::Mixed, o);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      q.p_r = grid[i];
      t.rows.push_back({sig, grid[i], op_mix_upper_bound(q, grid[i]).value,
                        curve[i].outage_prob, curve[i].std_error});
    }
  }
  return t;
}

// Aperture that minimizes the outage ratio, as a function of the scatter
// to distance ratio.
ResultTable figure_aperture(const RunConfig& cfg) {
  (void)cfg;
  ResultTable t;
  t.columns = {"alpha", "sigma_ratio", "phi0_star", "ratio_at_star"};
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double sr : log_grid(1e-3, 1.0, 25)) {
      NetworkParams q;
      q.alpha = alpha;
      q.lambda_in = lambda_in_of_sigma(sr * q.dest_distance);
      const auto r = optimize_phi0(q);
      t.rows.push_back({alpha, sr, r.phi0_star, r.ratio_at_star});
    }
  }
  return t;
}

// Largest rate meeting the outage target, direct versus mixed.
ResultTable figure_max_rate(const RunConfig& cfg) {
  ResultTable t;
  t.columns = {"alpha", "sigma_ratio", "rate_dt", "rate_mix"};
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double sr : log_grid(1e-3, 1.0, 25)) {
      NetworkParams q;
      q.alpha = alpha;
      q.lambda_in = lambda_in_of_sigma(sr * q.dest_distance);
      t.rows.push_back(
          {alpha, sr, max_rate_for_op(q, cfg.op_target, RateScheme::Dt),
           max_rate_for_op(q, cfg.op_target, RateScheme::Mix)});
    }
  }
  return t;
}

// Endpoint-optimized outage ratio against scatter, with the closed on/off
// condition as the vertical-line column.
ResultTable figure_gain(const RunConfig& cfg) {
  (void)cfg;
  ResultTable t;
  t.columns = {"alpha", "sigma_ratio", "gain_ratio", "sigma_t_ratio"};
  for (double alpha : {2.5, 3.0, 4.0}) {
    NetworkParams q;
    q.alpha = alpha;
    const double line = sigma_t(q).closed_bound / q.dest_distance;
    for (double sr : log_grid(1e-3, 1.0, 25)) {
      q.lambda_in = lambda_in_of_sigma(sr * q.dest_distance);
      t.rows.push_back({alpha, sr, op_gain_ratio(q), line});
    }
  }
  return t;
}

// Independent activation at its best probability versus channel-threshold
// activation with optimized thresholds.
ResultTable figure_threshold_rules(const RunConfig& cfg) {
  NetworkParams base;
  const auto grid = linear_grid(0.0, 1.0, 21);
  McOptions o;
  o.realizations = cfg.realizations;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  ResultTable t;
  t.columns = {"sigma_in",     "p_r_star",     "op_ind",
               "op_ind_stderr", "threshold_sr", "op_sr",
               "op_sr_stderr",  "threshold_rd", "op_rd",
               "op_rd_stderr"};
  for (double sig : log_grid(0.5, 8.0, 9)) {
    NetworkParams q = base;
    q.lambda_in = lambda_in_of_sigma(sig);
    const auto curve = estimate_op_curve(q, grid, McScheme::Mixed, o);
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].outage_prob < curve[best].outage_prob) best = i;
    const auto sr = optimize_threshold(
        q, ActivationRule::SourceRelayThreshold, o, cfg.budget);
    const auto rd = optimize_threshold(
        q, ActivationRule::RelayDestThreshold, o, cfg.budget);
    t.rows.push_back({sig, grid[best], curve[best].outage_prob,
                      curve[best].std_error, sr.threshold, sr.outage_prob,
                      sr.std_error, rd.threshold, rd.outage_prob,
                      rd.std_error});
  }
  return t;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

void append_params(std::ostringstream& os, const NetworkParams& p) {
  os << "lambda_s = " << format_value(p.lambda_s) << "\n";
  os << "lambda_in = " << format_value(p.lambda_in) << "\n";
  os << "alpha = " << format_value(p.alpha) << "\n";
  os << "rate = " << format_value(p.rate) << "\n";
  os << "dest_distance = " << format_value(p.dest_distance) << "\n";
  os << "phi0 = " << format_value(p.phi0) << "\n";
  os << "p_r = " << format_value(p.p_r) << "\n";
  os << "tau = " << format_value(p.tau) << "\n";
  os << "rho_re = " << format_value(p.rho.real()) << "\n";
  os << "rho_im = " << format_value(p.rho.imag()) << "\n";
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw ConfigParseError("sweep must look like field=v1,v2,...");
  SweepSpec spec;
  spec.field = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (true) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item.empty()) throw ConfigParseError("empty sweep value");
    spec.values.push_back(parse_number(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

void apply_field(RunConfig& cfg, const std::string& field, double value) {
  if (field == "lambda_s") {
    cfg.params.lambda_s = value;
  } else if (field == "lambda_in") {
    cfg.params.lambda_in = value;
  } else if (field == "sigma_in") {
    cfg.params.lambda_in = lambda_in_of_sigma(value);
  } else if (field == "alpha") {
    cfg.params.alpha = value;
  } else if (field == "rate") {
    cfg.params.rate = value;
  } else if (field == "dest_distance") {
    cfg.params.dest_distance = value;
  } else if (field == "phi0") {
    cfg.params.phi0 = value;
  } else if (field == "p_r") {
    cfg.params.p_r = value;
  } else if (field == "tau") {
    cfg.params.tau = value;
  } else if (field == "threshold") {
    cfg.threshold = value;
  } else if (field == "op_target") {
    cfg.op_target = value;
  } else if (field == "window_radius") {
    cfg.window_radius = value;
  } else if (field == "realizations") {
    cfg.realizations = static_cast<std::int64_t>(value);
  } else {
    throw ValidationError("unknown sweep field '" + field + "'");
  }
}

ResultTable run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "figure") {
    if (!cfg.sweep.empty())
      throw ValidationError("figures define their own grids; drop --sweep");
    if (cfg.figure.empty())
      throw ValidationError("the figure command needs a figure id");
    return run_figure(cfg.figure, cfg);
  }
  if (cfg.sweep.empty()) return run_once(command, cfg);
  const SweepSpec spec = parse_sweep(cfg.sweep);
  ResultTable t;
  for (double v : spec.values) {
    RunConfig c = cfg;
    c.sweep.clear();
    apply_field(c, spec.field, v);
    ResultTable one = run_once(command, c);
    if (t.columns.empty()) {
      t.columns.push_back(spec.field);
      t.columns.insert(t.columns.end(), one.columns.begin(),
                       one.columns.end());
    }
    for (auto& row : one.rows) {
      std::vector<double> full{v};
      full.insert(full.end(), row.begin(), row.end());
      t.rows.push_back(std::move(full));
    }
  }
  return t;
}

ResultTable run_figure(const std::string& figure, const RunConfig& cfg) {
  if (figure == "fig3") return figure_activation_curves(cfg);
  if (figure == "fig4") return figure_aperture(cfg);
  if (figure == "fig5") return figure_max_rate(cfg);
  if (figure == "fig6") return figure_gain(cfg);
  if (figure == "fig7") return figure_threshold_rules(cfg);
  throw UnknownFigure("unknown figure '" + figure +
                      "' (expected fig3..fig7)");
}

std::string csv_string(const ResultTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) os << ',';
    os << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_value(row[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::string manifest_string(const std::string& command,
                            const RunConfig& cfg) {
  const DerivedScalars ds = derive_scalars(cfg.params);
  std::ostringstream os;
  os << "# relaymix " << tool_version << "\n";
  os << "# command: " << command << "\n";
  os << "# derived: sigma_in = " << format_value(ds.sigma_in)
     << ", sigma_k = " << format_value(ds.sigma_k)
     << ", sir_threshold = " << format_value(ds.threshold)
     << ", nu = " << format_value(ds.nu) << "\n";
  append_params(os, cfg.params);
  os << "realizations = " << cfg.realizations << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "workers = " << cfg.workers << "\n";
  os << "far_field = " << (cfg.far_field ? "true" : "false") << "\n";
  os << "window_radius = " << format_value(cfg.window_radius) << "\n";
  os << "scheme = \"" << cfg.scheme << "\"\n";
  os << "rule = \"" << cfg.rule << "\"\n";
  os << "field_rule = \"" << cfg.field_rule << "\"\n";
  os << "threshold = " << format_value(cfg.threshold) << "\n";
  os << "op_target = " << format_value(cfg.op_target) << "\n";
  os << "r_samples = " << cfg.r_samples << "\n";
  os << "budget = " << cfg.budget << "\n";
  if (!cfg.sweep.empty()) os << "sweep = \"" << cfg.sweep << "\"\n";
  if (!cfg.figure.empty()) os << "figure = \"" << cfg.figure << "\"\n";
  if (!cfg.out.empty()) os << "out = \"" << cfg.out << "\"\n";
  return os.str();
}

void write_outputs(const std::string& command, const RunConfig& cfg,
                   const ResultTable& t, std::ostream& console) {
  const std::string csv = csv_string(t);
  if (cfg.out.empty()) {
    console << csv;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw Error("cannot write '" + cfg.out + "'");
  file << csv;
  file.close();
  std::ofstream manifest(cfg.out + ".manifest", std::ios::binary);
  if (!manifest) throw Error("cannot write '" + cfg.out + ".manifest'");
  manifest << manifest_string(command, cfg);
}

}  // namespace relaymix

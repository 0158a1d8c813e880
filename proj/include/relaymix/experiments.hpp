#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "relaymix/netmodel.hpp"

namespace relaymix {

// Execution layer behind the command line tool: resolves a run
// configuration into a results table and serializes it as CSV plus a
// replayable key-value manifest.

inline constexpr const char* tool_version = "1.0.0";

struct RunConfig {
  NetworkParams params;
  std::int64_t realizations = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  bool far_field = false;
  double window_radius = 0.0;  // 0: automatic truncation radius
  std::string scheme = "mixed";       // mixed | direct | relay
  std::string rule = "bernoulli";     // bernoulli | sr-threshold | rd-threshold
  std::string field_rule = "field";   // field | marginal
  double threshold = 0.0;
  double op_target = 0.03;
  std::int64_t r_samples = 10000;
  int budget = 24;
  std::string sweep;   // "field=v1,v2,..."; empty means a single run
  std::string figure;  // figure id, only read by the figure command
  std::string out;     // CSV path; empty prints the CSV to the console
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct SweepSpec {
  std::string field;
  std::vector<double> values;
};

// Splits "field=v1,v2,..." into its parts. Malformed text raises
// ConfigParseError.
SweepSpec parse_sweep(const std::string& text);

// Applies one swept value. Valid fields: the physical parameters
// (lambda_s, lambda_in, sigma_in, alpha, rate, dest_distance, phi0, p_r,
// tau) plus threshold, op_target, window_radius and realizations. Unknown
// fields raise ValidationError.
void apply_field(RunConfig& cfg, const std::string& field, double value);

// Executes one command and returns its table. With a sweep the command
// repeats per value and the swept field becomes the leading column.
// Commands: dt-op, bound, exact-op, mc, sigma-c, sigma-t, decide, gain,
// opt-phi, max-rate, figure.
ResultTable run_command(const std::string& command, const RunConfig& cfg);

// Figure recipes fig3..fig7. Physical parameters are pinned by the recipe;
// cfg contributes realizations, seed, workers and the search budget.
// Unknown ids raise UnknownFigure.
ResultTable run_figure(const std::string& figure, const RunConfig& cfg);

// CSV with one header line, comma separators, '.' decimal point and 17
// significant digits, so every double round-trips exactly.
std::string csv_string(const ResultTable& t);

// Flat "key = value" manifest covering every configuration knob; feeding it
// back through --config reproduces the CSV byte for byte. Derived scalars
// and the tool version ride along as '#' comments.
std::string manifest_string(const std::string& command, const RunConfig& cfg);

// Writes the CSV to cfg.out and the manifest to cfg.out + ".manifest", or
// prints the CSV to console when cfg.out is empty.
void write_outputs(const std::string& command, const RunConfig& cfg,
                   const ResultTable& t, std::ostream& console);

}  // namespace relaymix

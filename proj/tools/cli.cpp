// Copyright 2026 The ghzguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ghzguard::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string escape_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string format_complex(Complex z) {
  std::string im = format_number(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_number(z.real()) + im + "i";
}

std::string cell_to_csv(const Cell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(Complex z) const { return format_complex(z); }
    std::string operator()(const Distribution& d) const {
      std::string s;
      for (const auto& [k, v] : d) {
        if (!s.empty()) s += ';';
        s += k + ':' + format_number(v);
      }
      return s;
    }
    std::string operator()(const Matrix& m) const {
      std::string s;
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) s += ';';
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          if (c) s += ' ';
          s += format_complex(m(r, c));
        }
      }
      return s;
    }
  };
  return escape_csv(std::visit(Visitor{}, cell));
}

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;
}

nlohmann::ordered_json json_complex(Complex z) {
  return {{"re", json_number(z.real())}, {"im", json_number(z.imag())}};
}

nlohmann::ordered_json cell_to_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double v) const { return json_number(v); }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(Complex z) const { return json_complex(z); }
    nlohmann::ordered_json operator()(const Distribution& d) const {
      auto obj = nlohmann::ordered_json::object();
      for (const auto& [k, v] : d) obj[k] = json_number(v);
      return obj;
    }
    nlohmann::ordered_json operator()(const Matrix& m) const {
      auto rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json_complex(m(r, c)));
        rows.push_back(std::move(row));
      }
      return rows;
    }
  };
  return std::visit(Visitor{}, cell);
}

Distribution to_distribution(const std::map<Label, double>& dist) {
  Distribution out;
  for (const auto& [label, prob] : dist) out.emplace(label.to_string(), prob);
  return out;
}

std::vector<double> sorted_grid(std::vector<double> ps) {
  if (ps.empty()) throw UsageError("no p values given");
  for (double p : ps) {
    if (!std::isfinite(p)) throw UsageError("p must be a finite number");
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

std::vector<std::string> variants_of(const GridOptions& o) {
  if (!o.variant) return {"epr", "ghz"};
  if (*o.variant != "epr" && *o.variant != "ghz") {
    throw UsageError("--variant must be epr or ghz");
  }
  if (*o.variant == "epr" && o.postselect) {
    throw UsageError("--postselect needs --variant ghz: EPR outcomes are never discarded");
  }
  return {*o.variant};
}

StateVector psi_of(const GridOptions& o) {
  Vector amps(2);
  amps << std::cos(o.theta / 2.0), std::polar(std::sin(o.theta / 2.0), o.phi);
  return StateVector(std::move(amps));
}

ProtocolResult run_point(const std::string& protocol, const std::string& variant, double p,
                         NoiseMode mode, bool postselect, const GridOptions& o) {
  const NoiseLevel noise{p, mode};
  if (protocol == "teleport") {
    const StateVector psi = psi_of(o);
    const TeleportInput in{psi[0], psi[1], noise};
    return variant == "epr" ? teleport_epr(in) : teleport_ghz(in, postselect);
  }
  return variant == "epr" ? dense_epr(o.message, noise)
                          : dense_ghz(o.message, noise, postselect);
}

std::vector<std::string> protocol_columns(NoiseMode mode) {
  std::vector<std::string> cols{"protocol",
                                "variant",
                                "p",
                                "mode",
                                "postselect",
                                "input",
                                "fidelity",
                                "desired_component_weight",
                                "acceptance_rate",
                                "detected_probability",
                                "outcome_distribution",
                                "output_state"};
  if (mode == NoiseMode::kExact) cols.emplace_back("trace_distance_first_order");
  return cols;
}

std::string input_of(const std::string& protocol, const GridOptions& o) {
  if (protocol == "teleport") {
    return "theta=" + format_number(o.theta) + ";phi=" + format_number(o.phi);
  }
  return "message=" + std::to_string(o.message.a1) + std::to_string(o.message.a2);
}

void add_protocol_rows(Report& report, const std::string& protocol, double p,
                       const GridOptions& o) {
  for (const auto& variant : variants_of(o)) {
    const bool postselect = variant == "ghz" && o.postselect;
    const ProtocolResult r = run_point(protocol, variant, p, o.mode, postselect, o);
    std::vector<Cell> row{protocol,
                          variant,
                          p,
                          to_string(o.mode),
                          postselect,
                          input_of(protocol, o),
                          r.fidelity_to_target,
                          r.desired_component_weight,
                          r.acceptance_rate,
                          r.detected_probability,
                          to_distribution(r.outcome_distribution),
                          r.output_state.entries()};
    if (o.mode == NoiseMode::kExact) {
      double td = kNaN;
      try {
        const ProtocolResult first =
            run_point(protocol, variant, p, NoiseMode::kFirstOrder, postselect, o);
        td = trace_distance(r.output_state, first.output_state);
      } catch (const DomainError&) {
        // p outside the first-order regime for this variant
      }
      row.emplace_back(td);
    }
    report.add_row(std::move(row));
  }
}

Report protocol_report(const std::string& command, const std::vector<std::string>& protocols,
                       const GridOptions& o) {
  Report report{command, protocol_columns(o.mode), {}};
  const auto ps = sorted_grid(o.ps);
  for (const auto& protocol : protocols) {
    for (double p : ps) add_protocol_rows(report, protocol, p, o);
  }
  return report;
}

NoiseMode parse_mode_flag(const std::string& text) {
  try {
    return parse_noise_mode(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InternalError("report row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += escape_csv(report.columns[i]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["columns"] = report.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[report.columns[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

std::string render(const Report& report, Format format) {
  if (format == Format::kCsv) return to_csv(report);
  return to_json(report).dump(2) + "\n";
}

std::vector<double> parse_p_range(std::string_view spec) {
  double parts[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? spec.find(':', start) : spec.size();
    if (end == std::string_view::npos) throw UsageError("--p-range expects start:stop:step");
    const std::string_view field = spec.substr(start, end - start);
    const auto res = std::from_chars(field.data(), field.data() + field.size(), parts[i]);
    if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
      throw UsageError("--p-range: cannot parse '" + std::string(field) + "'");
    }
    start = end + 1;
  }
  const auto [lo, hi, step] = parts;
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError("--p-range needs finite bounds and a positive step");
  }
  if (hi < lo) throw UsageError("--p-range is empty");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1000000) throw UsageError("--p-range has too many points");
  std::vector<double> ps;
  ps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ps.push_back(lo + static_cast<double>(i) * step);
  return ps;
}

Message parse_message(std::string_view bits) {
  if (bits.size() != 2 || bits.find_first_not_of("01") != std::string_view::npos) {
    throw UsageError("--message expects two bits, e.g. 10");
  }
  return Message{static_cast<unsigned>(bits[0] - '0'), static_cast<unsigned>(bits[1] - '0')};
}

Report cmd_teleport(const GridOptions& options) {
  return protocol_report("teleport", {"teleport"}, options);
}

Report cmd_dense(const GridOptions& options) {
  return protocol_report("dense", {"dense"}, options);
}

Report cmd_sweep(const SweepConfig& config) {
  std::vector<std::string> protocols = config.protocols;
  std::sort(protocols.begin(), protocols.end());
  protocols.erase(std::unique(protocols.begin(), protocols.end()), protocols.end());
  if (protocols.empty()) throw UsageError("--protocol is empty");

  if (std::find(protocols.begin(), protocols.end(), "nghz") == protocols.end()) {
    for (const auto& p : protocols) {
      if (p != "teleport" && p != "dense") throw UsageError("unknown sweep protocol: " + p);
    }
    return protocol_report("sweep", protocols, config.grid);
  }

  if (protocols.size() != 1) throw UsageError("nghz cannot be combined with other protocols");
  if (config.grid.mode != NoiseMode::kFirstOrder) {
    throw UsageError("nghz efficiencies are defined for first-order noise only");
  }
  if (config.n_min < 2 || config.n_max < config.n_min) {
    throw UsageError("need 2 <= --n-min <= --n-max");
  }
  if (config.n_max > 10) throw UsageError("--n-max above 10 is not supported for nghz sweeps");
  Report report{"sweep",
                {"protocol", "variant", "p", "mode", "postselect", "n_parties", "closed_form",
                 "simulated_success", "simulated_acceptance", "epr_baseline", "discrepancy"},
                {}};
  for (double p : sorted_grid(config.grid.ps)) {
    for (int n = config.n_min; n <= config.n_max; ++n) {
      const NghzEfficiency e = nghz_efficiency(n, p);
      report.add_row({std::string("nghz"), "ghz-" + std::to_string(n), p,
                      to_string(NoiseMode::kFirstOrder), e.detection_possible,
                      static_cast<std::uint64_t>(n), e.closed_form, e.simulated_success,
                      e.simulated_acceptance, 1.0 - 2.0 * p, e.discrepancy});
    }
  }
  return report;
}

Report cmd_optimal_n(double p, int n_max) {
  const OptimalNReport scan = scan_optimal_n(p, n_max);
  Report report{"optimal-n",
                {"p", "n_parties", "efficiency", "best", "degenerate", "epr_baseline"},
                {}};
  for (const auto& [n, eff] : scan.efficiencies) {
    report.add_row({p, static_cast<std::uint64_t>(n), eff, static_cast<std::uint64_t>(scan.best),
                    scan.degenerate, scan.epr_baseline});
  }
  return report;
}

Report cmd_mc(const TrajectoryConfig& config, double z_threshold) {
  const EmpiricalStats stats = run_trajectories(config);
  const ComparisonReport cmp = compare_to_analytic(stats, analytic_result(config), z_threshold);
  Distribution flips;
  for (const auto& [k, v] : stats.flip_histogram) {
    flips.emplace(std::to_string(k), static_cast<double>(v));
  }
  Report report{"mc",
                {"protocol", "p", "mode", "postselect", "shots", "seed", "rng", "partitions",
                 "label", "count", "observed", "expected", "z", "flagged", "acceptance_rate",
                 "acceptance_stderr", "success_rate", "success_stderr", "mean_fidelity",
                 "flip_histogram"},
                {}};
  for (const auto& row : cmp.rows) {
    report.add_row({to_string(config.protocol), config.noise.p, to_string(config.noise.mode),
                    config.postselect, stats.shots, stats.seed, stats.rng_name,
                    static_cast<std::uint64_t>(stats.partitions), row.label.to_string(), row.count,
                    row.observed, row.expected, row.z, row.flagged, stats.acceptance_rate,
                    stats.acceptance_stderr, stats.success_rate, stats.success_stderr,
                    stats.mean_fidelity, flips});
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy EPR and GHZ teleportation / dense coding simulator", "ghzguard"};
  app.footer(
      "Environment:\n"
      "  GHZGUARD_TOL  normalization tolerance used by every validity check (default 1e-10)");
  app.require_subcommand(1);

  std::optional<std::string> variant;
  std::vector<double> ps;
  std::string p_range;
  std::string mode_text = "first-order";
  bool postselect = false;
  double theta = 1.0;
  double phi = 0.5;
  std::string message_text = "00";
  std::vector<std::string> sweep_protocols{"teleport"};
  std::string mc_protocol = "dense-ghz";
  int n_min = 3;
  int n_max = 8;
  std::int64_t shots = 100000;
  std::uint64_t seed = 0;
  unsigned partitions = 1;
  unsigned workers = 1;
  double z_threshold = 4.0;
  std::string format_text = "csv";
  std::string out_path;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
  };
  auto add_p = [&](CLI::App* sub) {
    auto* single = sub->add_option("--p", ps, "Flip probability (comma-separated list allowed)")
                       ->delimiter(',');
    auto* range = sub->add_option("--p-range", p_range, "start:stop:step, stop inclusive");
    single->excludes(range);
    range->excludes(single);
  };
  auto add_noise = [&](CLI::App* sub) {
    add_p(sub);
    sub->add_option("--mode", mode_text, "exact or first-order");
    sub->add_flag("--postselect", postselect, "Discard runs with a detected flip (GHZ only)");
  };
  auto add_psi = [&](CLI::App* sub) {
    sub->add_option("--theta", theta, "Teleported state polar angle");
    sub->add_option("--phi", phi, "Teleported state phase");
  };
  auto add_message = [&](CLI::App* sub) {
    sub->add_option("--message", message_text, "Two classical bits a1 a2, e.g. 10");
  };

  CLI::App* teleport = app.add_subcommand("teleport", "Teleport one qubit through a noisy resource");
  teleport->add_option("--variant", variant, "epr or ghz (default: both)");
  add_noise(teleport);
  add_psi(teleport);
  add_output(teleport);

  CLI::App* dense = app.add_subcommand("dense", "Superdense coding over a noisy resource");
  dense->add_option("--variant", variant, "epr or ghz (default: both)");
  add_noise(dense);
  add_message(dense);
  add_output(dense);

  CLI::App* sweep = app.add_subcommand("sweep", "Grid of protocol runs over p");
  sweep->add_option("--protocol", sweep_protocols, "teleport, dense (comma-separated) or nghz")
      ->delimiter(',');
  sweep->add_option("--variant", variant, "epr or ghz (default: both)");
  add_noise(sweep);
  add_psi(sweep);
  add_message(sweep);
  sweep->add_option("--n-min", n_min, "Smallest party count for nghz");
  sweep->add_option("--n-max", n_max, "Largest party count for nghz");
  add_output(sweep);

  CLI::App* optimal = app.add_subcommand("optimal-n", "Efficiency against party count");
  add_p(optimal);
  optimal->add_option("--n-max", n_max, "Largest party count");
  add_output(optimal);

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo trajectories checked against the analytic result");
  mc->add_option("--protocol", mc_protocol, "teleport-epr, teleport-ghz, dense-epr or dense-ghz");
  add_noise(mc);
  add_psi(mc);
  add_message(mc);
  mc->add_option("--shots", shots, "Number of trajectories");
  mc->add_option("--seed", seed, "64-bit seed");
  mc->add_option("--partitions", partitions, "RNG substreams the shots are split across");
  mc->add_option("--workers", workers, "Threads running the substreams");
  mc->add_option("--z-threshold", z_threshold, "Flag labels with |z| above this");
  add_output(mc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    GridOptions grid;
    grid.variant = variant;
    grid.ps = p_range.empty() ? ps : parse_p_range(p_range);
    grid.mode = parse_mode_flag(mode_text);
    grid.postselect = postselect;
    grid.theta = theta;
    grid.phi = phi;
    grid.message = parse_message(message_text);

    Report report;
    if (teleport->parsed()) {
      report = cmd_teleport(grid);
    } else if (dense->parsed()) {
      report = cmd_dense(grid);
    } else if (sweep->parsed()) {
      report = cmd_sweep(SweepConfig{sweep_protocols, grid, n_min, n_max});
    } else if (optimal->parsed()) {
      if (grid.ps.size() != 1) throw UsageError("optimal-n takes exactly one --p");
      report = cmd_optimal_n(grid.ps.front(), n_max);
    } else {
      if (grid.ps.size() != 1) throw UsageError("mc takes exactly one --p");
      if (shots < 1) throw UsageError("--shots must be at least 1");
      TrajectoryConfig config;
      try {
        config.protocol = parse_protocol_id(mc_protocol);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (postselect && (config.protocol == ProtocolId::kTeleportEpr ||
                         config.protocol == ProtocolId::kDenseEpr)) {
        throw UsageError("--postselect needs a GHZ protocol");
      }
      const StateVector psi = psi_of(grid);
      config.noise = NoiseLevel{grid.ps.front(), grid.mode};
      config.postselect = postselect;
      config.shots = static_cast<std::uint64_t>(shots);
      config.seed = seed;
      config.message = grid.message;
      config.alpha0 = psi[0];
      config.alpha1 = psi[1];
      config.partitions = partitions;
      config.workers = workers;
      report = cmd_mc(config, z_threshold);
    }

    const std::string text =
        render(report, format_text == "json" ? Format::kJson : Format::kCsv);
    if (out_path.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
      if (!file) {
        err << "ghzguard: cannot open " << out_path << " for writing\n";
        return kExitFailure;
      }
      file << text;
      file.close();
      if (!file) {
        err << "ghzguard: failed writing " << out_path << "\n";
        return kExitFailure;
      }
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "ghzguard: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "ghzguard: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "ghzguard: invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ghzguard: error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ghzguard::cli

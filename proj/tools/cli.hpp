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

#pragma once

#include "ghzguard/montecarlo.hpp"
#include "ghzguard/protocols.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ghzguard::cli {

/// Bad flags or flag combinations. Exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

using Distribution = std::map<std::string, double>;
using Cell = std::variant<std::string, double, std::uint64_t, bool, Complex, Distribution, Matrix>;

/// A table with a fixed column set; every row carries every column.
struct Report {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class Format { kCsv, kJson };

/// 12 significant digits, '.' separator, independent of the global locale.
std::string format_number(double value);

/// Header line plus one line per row. Distributions are written as
/// "000:0.25;001:0", complex numbers as "re+imi", matrices as
/// space-separated entries with rows joined by ';'.
std::string to_csv(const Report& report);
/// {"command", "columns", "rows": [{column: value}]}. Complex numbers are
/// {"re", "im"} objects, matrices nested arrays of them; non-finite numbers
/// become null.
nlohmann::ordered_json to_json(const Report& report);
std::string render(const Report& report, Format format);

/// "start:stop:step", stop inclusive. Throws UsageError on a malformed or
/// empty range.
std::vector<double> parse_p_range(std::string_view spec);

/// Two bits, e.g. "10" for a1 = 1, a2 = 0.
Message parse_message(std::string_view bits);

struct GridOptions {
  /// "epr" or "ghz"; both when empty.
  std::optional<std::string> variant;
  std::vector<double> ps;
  NoiseMode mode = NoiseMode::kFirstOrder;
  /// Applies to the GHZ variant; EPR has nothing to discard.
  bool postselect = false;
  /// Teleported state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  double theta = 1.0;
  double phi = 0.5;
  Message message;
};

Report cmd_teleport(const GridOptions& options);
Report cmd_dense(const GridOptions& options);

struct SweepConfig {
  /// Any of "teleport", "dense"; or "nghz" on its own.
  std::vector<std::string> protocols{"teleport"};
  GridOptions grid;
  int n_min = 3;
  int n_max = 6;
};

/// Rows sorted by (protocol, p, variant).
Report cmd_sweep(const SweepConfig& config);

Report cmd_optimal_n(double p, int n_max);

/// One row per outcome label with its z-score, plus run-level statistics.
Report cmd_mc(const TrajectoryConfig& config, double z_threshold = 4.0);

/// Parses `args` (without the program name), runs the subcommand and writes
/// data to `out` or the --out file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ghzguard::cli

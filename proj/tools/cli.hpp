#pragma once

// Batch front-end: scenario registry, strict JSON configuration and CSV/JSON
// output.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmeas/numerics.hpp"

namespace qmeas::cli {

enum class Kind { Real, Integer, Boolean };

struct ParamSpec {
  std::string name;
  Kind kind;
  double fallback;
  std::string doc;
};

/// Resolved parameters; integers and booleans are stored as exact doubles.
using Params = std::map<std::string, double>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Result {
  std::vector<std::pair<std::string, double>> values;  // results.csv rows
  std::optional<Table> detail;                         // detail.csv
};

struct Scenario {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::function<Result(const Params&, const Tolerances&, std::uint64_t seed)> run;
};

const std::vector<Scenario>& scenarios();
const Scenario& find_scenario(const std::string& name);

/// Raised for malformed or unknown configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario;
  Params parameters;
  Tolerances numerics;
  std::map<std::string, double> numerics_overrides;
  std::uint64_t seed = 0;
};

/// Defaults, then the JSON file (if any), then key=value overrides.
RunConfig load_config(const std::string& scenario, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed);

/// Full-precision decimal (17 significant digits).
std::string format_number(double v);

/// Entry point; returns the process exit code (0 ok, 2 validation, 3 contract).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qmeas::cli

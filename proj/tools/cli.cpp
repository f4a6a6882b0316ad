#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "qmeas/errors.hpp"

#ifndef QMEAS_VERSION
#define QMEAS_VERSION "0.0.0"
#endif

namespace qmeas::cli {

namespace {

using json = nlohmann::ordered_json;

struct TolField {
  const char* name;
  double Tolerances::*member;
};

constexpr TolField kTolFields[] = {
    {"hermiticity", &Tolerances::hermiticity},
    {"trace", &Tolerances::trace},
    {"positivity", &Tolerances::positivity},
    {"unitarity", &Tolerances::unitarity},
    {"normalization", &Tolerances::normalization},
    {"marker_normalization", &Tolerances::marker_normalization},
    {"degeneracy", &Tolerances::degeneracy},
    {"projector", &Tolerances::projector},
    {"completeness", &Tolerances::completeness},
    {"min_probability", &Tolerances::min_probability},
    {"overlap_floor", &Tolerances::overlap_floor},
    {"distribution_sum", &Tolerances::distribution_sum},
    {"negative_probability", &Tolerances::negative_probability},
};

const ParamSpec& find_param(const Scenario& s, const std::string& key) {
  for (const auto& p : s.params) {
    if (p.name == key) return p;
  }
  throw ConfigError("scenario '" + s.name + "' has no parameter '" + key + "'");
}

double check_kind(const ParamSpec& spec, double v) {
  if (!std::isfinite(v)) throw ConfigError("parameter '" + spec.name + "' must be finite");
  if (spec.kind == Kind::Integer && v != std::floor(v)) {
    throw ConfigError("parameter '" + spec.name + "' must be an integer");
  }
  if (spec.kind == Kind::Boolean && v != 0.0 && v != 1.0) {
    throw ConfigError("parameter '" + spec.name + "' must be a boolean");
  }
  return v;
}

double param_from_json(const ParamSpec& spec, const json& v) {
  switch (spec.kind) {
    case Kind::Boolean:
      if (!v.is_boolean()) throw ConfigError("parameter '" + spec.name + "' must be a JSON boolean");
      return v.get<bool>() ? 1.0 : 0.0;
    case Kind::Integer:
      if (!v.is_number_integer()) throw ConfigError("parameter '" + spec.name + "' must be a JSON integer");
      return check_kind(spec, static_cast<double>(v.get<std::int64_t>()));
    case Kind::Real:
      if (!v.is_number()) throw ConfigError("parameter '" + spec.name + "' must be a JSON number");
      return check_kind(spec, v.get<double>());
  }
  throw ConfigError("unreachable parameter kind");
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("value '" + text + "' for '" + key + "' is not a number");
  }
  if (used != text.size()) throw ConfigError("value '" + text + "' for '" + key + "' is not a number");
  return v;
}

double from_text(const ParamSpec& spec, const std::string& text) {
  if (spec.kind == Kind::Boolean) {
    if (text == "true" || text == "1") return 1.0;
    if (text == "false" || text == "0") return 0.0;
    throw ConfigError("parameter '" + spec.name + "' must be true or false");
  }
  return check_kind(spec, parse_number(spec.name, text));
}

json param_json(const ParamSpec& spec, double v) {
  switch (spec.kind) {
    case Kind::Boolean:
      return v != 0.0;
    case Kind::Integer:
      return static_cast<std::int64_t>(v);
    case Kind::Real:
      return v;
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in value list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string table_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t j = 0; j < t.header.size(); ++j) os << (j ? "," : "") << t.header[j];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_number(row[j]);
    os << '\n';
  }
  return os.str();
}

json manifest(const std::string& command, const RunConfig& cfg, const Scenario& s) {
  json m;
  m["tool"] = "qmeas";
  m["version"] = QMEAS_VERSION;
  m["command"] = command;
  m["scenario"] = cfg.scenario;
  json params = json::object();
  for (const auto& spec : s.params) params[spec.name] = param_json(spec, cfg.parameters.at(spec.name));
  m["parameters"] = params;
  json numerics = json::object();
  for (const auto& f : kTolFields) numerics[f.name] = cfg.numerics.*(f.member);
  m["numerics"] = numerics;
  m["seed"] = cfg.seed;
  return m;
}

struct Common {
  std::string scenario;
  std::optional<std::string> config;
  std::string out = "qmeas-out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("scenario", c.scenario, "scenario name (see 'list')")->required();
  cmd->add_option("--config", c.config, "JSON configuration file");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed (overrides the configuration)");
  cmd->add_option("--set", c.sets, "parameter override key=value (repeatable)");
}

int run_command(const Common& c, bool search, std::ostream& out) {
  const Scenario& s = find_scenario(c.scenario);
  std::vector<std::string> sets = c.sets;
  if (search) {
    find_param(s, "search");
    sets.push_back("search=true");
  }
  const RunConfig cfg = load_config(c.scenario, c.config, sets, c.seed);
  const Result r = s.run(cfg.parameters, cfg.numerics, cfg.seed);

  Table results{{"quantity", "value"}, {}};
  std::ostringstream csv;
  csv << "quantity,value\n";
  for (const auto& [name, value] : r.values) csv << name << ',' << format_number(value) << '\n';

  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", csv.str());
  json m = manifest("run", cfg, s);
  json files = json::array({"results.csv"});
  if (r.detail) {
    write_file(dir / "detail.csv", table_csv(*r.detail));
    files.push_back("detail.csv");
  }
  m["files"] = files;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  out << csv.str();
  return 0;
}

int sweep_command(const Common& c, const std::string& vary, const std::string& values, std::ostream& out) {
  const Scenario& s = find_scenario(c.scenario);
  const ParamSpec& spec = find_param(s, vary);
  const std::vector<std::string> items = split_csv(values);
  const RunConfig base = load_config(c.scenario, c.config, c.sets, c.seed);

  Table table;
  json list = json::array();
  for (const auto& item : items) {
    RunConfig cfg = base;
    cfg.parameters[vary] = from_text(spec, item);
    list.push_back(param_json(spec, cfg.parameters[vary]));
    const Result r = s.run(cfg.parameters, cfg.numerics, cfg.seed);
    std::vector<std::string> header{vary};
    std::vector<double> row{cfg.parameters[vary]};
    for (const auto& [name, value] : r.values) {
      header.push_back(name);
      row.push_back(value);
    }
    if (table.header.empty()) {
      table.header = header;
    } else if (header != table.header) {
      throw InvalidArgument("sweep: result columns differ between values");
    }
    table.rows.push_back(std::move(row));
  }

  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  const std::string csv = table_csv(table);
  write_file(dir / "results.csv", csv);
  json m = manifest("sweep", base, s);
  m["vary"] = vary;
  m["values"] = list;
  m["files"] = json::array({"results.csv"});
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  out << csv;
  return 0;
}

void list_scenarios(std::ostream& out) {
  for (const auto& s : scenarios()) {
    out << s.name << ": " << s.summary << '\n';
    for (const auto& p : s.params) {
      const char* kind = p.kind == Kind::Real ? "real" : p.kind == Kind::Integer ? "integer" : "boolean";
      out << "  " << p.name << " (" << kind << ", default " << format_number(p.fallback) << "): " << p.doc
          << '\n';
    }
  }
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

RunConfig load_config(const std::string& scenario, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed) {
  const Scenario& s = find_scenario(scenario);
  RunConfig cfg;
  cfg.scenario = scenario;
  for (const auto& p : s.params) cfg.parameters[p.name] = p.fallback;
  cfg.seed = 1;

  if (path) {
    std::ifstream f(*path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file '" + *path + "'");
    json doc;
    try {
      doc = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "scenario") {
        if (!value.is_string() || value.get<std::string>() != scenario) {
          throw ConfigError("config scenario does not match '" + scenario + "'");
        }
      } else if (key == "parameters") {
        if (!value.is_object()) throw ConfigError("'parameters' must be an object");
        for (const auto& [pk, pv] : value.items()) cfg.parameters[pk] = param_from_json(find_param(s, pk), pv);
      } else if (key == "numerics") {
        if (!value.is_object()) throw ConfigError("'numerics' must be an object");
        for (const auto& [nk, nv] : value.items()) {
          const TolField* field = nullptr;
          for (const auto& t : kTolFields) {
            if (nk == t.name) field = &t;
          }
          if (!field) throw ConfigError("unknown numerics key '" + nk + "'");
          if (!nv.is_number() || !(nv.get<double>() >= 0.0)) {
            throw ConfigError("numerics '" + nk + "' must be a non-negative number");
          }
          cfg.numerics.*(field->member) = nv.get<double>();
          cfg.numerics_overrides[nk] = nv.get<double>();
        }
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw ConfigError("'seed' must be an unsigned integer");
        cfg.seed = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  }

  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq);
    cfg.parameters[key] = from_text(find_param(s, key), o.substr(eq + 1));
  }
  if (seed) cfg.seed = *seed;
  return cfg;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmeas: quantum measurement simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QMEAS_VERSION);

  Common run_opts;
  bool search = false;
  CLI::App* run = app.add_subcommand("run", "run one scenario");
  add_common(run, run_opts);
  run->add_flag("--search", search, "shorthand for --set search=true");

  Common sweep_opts;
  std::string vary;
  std::string values;
  CLI::App* sweep = app.add_subcommand("sweep", "run one scenario over a list of parameter values");
  add_common(sweep, sweep_opts);
  sweep->add_option("--vary", vary, "parameter to vary")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  CLI::App* list = app.add_subcommand("list", "list scenarios and parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_command(run_opts, search, out);
    if (*sweep) return sweep_command(sweep_opts, vary, values, out);
    if (*list) {
      list_scenarios(out);
      return 0;
    }
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qmeas::cli

#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanvalue.hpp"

namespace hna {

/// Raised for malformed configuration or grid strings; the CLI maps it to a usage error.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A real grid, either listed or uniform: "0,1,5" or "0:10:11" (min:max:count).
struct GridSpec {
  std::vector<double> values;

  static GridSpec parse(const std::string& text) {
    GridSpec g;
    if (text.find(':') != std::string::npos) {
      std::stringstream ss(text);
      std::string a, b, c;
      if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || c.find(':') != std::string::npos)
        throw config_error("grid '" + text + "': expected min:max:count");
      try {
        g.values = linear_grid(std::stod(a), std::stod(b), std::stoi(c));
      } catch (const config_error&) {
        throw;
      } catch (const std::exception&) {
        throw config_error("grid '" + text + "': expected min:max:count with min < max and count >= 2");
      }
      return g;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        g.values.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw config_error("grid '" + text + "': '" + item + "' is not a number");
      }
    }
    if (g.values.empty()) throw config_error("grid '" + text + "' is empty");
    return g;
  }

  static GridSpec from_json(const nlohmann::json& j) {
    GridSpec g;
    if (j.is_string()) return parse(j.get<std::string>());
    if (j.is_array()) {
      for (const auto& v : j) {
        if (!v.is_number()) throw config_error("grid: array entries must be numbers");
        g.values.push_back(v.get<double>());
      }
      if (g.values.empty()) throw config_error("grid: empty array");
      return g;
    }
    if (j.is_object()) {
      double lo = 0.0, hi = 0.0;
      int count = 0;
      for (const auto& [key, value] : j.items()) {
        if (key == "min") lo = value.get<double>();
        else if (key == "max") hi = value.get<double>();
        else if (key == "count") count = value.get<int>();
        else throw config_error("grid: unknown key '" + key + "'");
      }
      if (count < 2 || !(lo < hi)) throw config_error("grid: need min < max and count >= 2");
      g.values = linear_grid(lo, hi, count);
      return g;
    }
    throw config_error("grid: expected a string, an array or {min, max, count}");
  }
};

/// Global run configuration; a JSON file is read first and command-line flags override it.
struct RunConfig {
  int k = 1;
  int b = 1;
  QuadratureSpec quadrature;
  std::optional<GridSpec> lambda_grid;
  std::optional<GridSpec> r_grid;
  double xi_max = 200.0;
  int xi_points = 200;
  std::string output_path;  ///< empty: standard output
  std::string format = "csv";

  void validate() const {
    if (format != "csv" && format != "json") throw config_error("output.format must be csv or json");
    if (b < 1) throw config_error("algebra.b must be positive");
    if (!(xi_max > 0.0) || xi_points < 200) throw config_error("grids.xi needs max > 0 and points >= 200");
    try {
      quadrature.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }

  /// Strict parse: every object level rejects unknown keys.
  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    if (!j.is_object()) throw config_error("config: expected a JSON object");
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "algebra") {
          for (const auto& [ak, av] : value.items()) {
            if (ak == "k") c.k = av.get<int>();
            else if (ak == "b") c.b = av.get<int>();
            else throw config_error("algebra: unknown key '" + ak + "'");
          }
        } else if (key == "quadrature") {
          c.quadrature = value.get<QuadratureSpec>();
        } else if (key == "grids") {
          for (const auto& [gk, gv] : value.items()) {
            if (gk == "lambda") c.lambda_grid = GridSpec::from_json(gv);
            else if (gk == "r") c.r_grid = GridSpec::from_json(gv);
            else if (gk == "xi") {
              for (const auto& [xk, xv] : gv.items()) {
                if (xk == "max") c.xi_max = xv.get<double>();
                else if (xk == "points") c.xi_points = xv.get<int>();
                else throw config_error("grids.xi: unknown key '" + xk + "'");
              }
            } else throw config_error("grids: unknown key '" + gk + "'");
          }
        } else if (key == "output") {
          for (const auto& [ok, ov] : value.items()) {
            if (ok == "path") c.output_path = ov.get<std::string>();
            else if (ok == "format") c.format = ov.get<std::string>();
            else throw config_error("output: unknown key '" + ok + "'");
          }
        } else if (key == "seed") {
          c.quadrature.seed = value.get<std::uint64_t>();
        } else {
          throw config_error("config: unknown key '" + key + "'");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw config_error(std::string("config: ") + e.what());
    } catch (const config_error&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
    c.validate();
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw config_error("config '" + path + "': " + e.what());
    }
    return from_json(j);
  }
};

/// Column table written as CSV (17 significant digits) or as a JSON array of row objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != header.size()) throw std::logic_error("Table: row width does not match header");
    rows.push_back(std::move(row));
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    os << std::setprecision(17);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
  }

  [[nodiscard]] nlohmann::json to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      out.push_back(obj);
    }
    return out;
  }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") os << std::setprecision(17) << to_json().dump(1) << '\n';
    else write_csv(os);
  }
};

}  // namespace hna

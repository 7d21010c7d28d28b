#pragma once

// Flat key = value run files and the CSV rows the command-line tool appends.
//
//   # comment
//   lambda = 1e-5, 4e-5      (list-valued keys expand into a grid)
//   n_t = 1, 2, 4
//   detector = both
//
// Grid keys: lambda, alpha, n_t, n_r, l_cancel. Scalar keys: r_d, power_dbm,
// noise_dbm, csir, interference_limited, window_radius, detector,
// antenna_dist, sweep_axis, sweep_values, and the scaling keys beta1, beta2,
// c1, c2, lambda_log10_lo, lambda_log10_hi.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mimonet/config.hpp"
#include "mimonet/error.hpp"

namespace mimonet::io {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && used > 0, ErrorKind::config_parse,
          "key '" + key + "': '" + text + "' is not a number");
  return value;
}

inline int parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  require(v == static_cast<double>(static_cast<int>(v)), ErrorKind::config_parse,
          "key '" + key + "': '" + text + "' is not an integer");
  return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorKind::config_parse, "key '" + key + "': '" + text + "' is not a boolean");
}

inline std::vector<Detector> parse_detectors(const std::string& text) {
  if (text == "zf") return {Detector::zf};
  if (text == "zf_sic" || text == "sic") return {Detector::zf_sic};
  if (text == "both") return {Detector::zf, Detector::zf_sic};
  throw Error(ErrorKind::config_parse, "detector must be zf, zf_sic or both, got '" + text + "'");
}

inline CsirMode parse_csir(const std::string& text) {
  if (text == "direct") return CsirMode::direct;
  if (text == "local") return CsirMode::local;
  throw Error(ErrorKind::config_parse, "csir must be direct or local, got '" + text + "'");
}

struct SweepSpec {
  std::string axis;
  std::vector<double> values;
};

struct ScalingSpec {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double c1 = 1.0;
  double c2 = 8.0;
  // Explicit lambda range; when unset the fit starts four decades past the knee.
  std::optional<double> log10_lo;
  std::optional<double> log10_hi;
};

/// Parsed run file. Grid keys keep all their listed values.
struct RunFile {
  std::vector<double> lambda{1e-5};
  std::vector<double> alpha{4.0};
  std::vector<int> n_t{1};
  std::vector<int> n_r{4};
  std::vector<int> l_cancel{0};
  std::optional<std::vector<double>> antenna_dist;
  double r_d = 50.0;
  double power_dbm = -20.0;
  double noise_dbm = -104.0;
  CsirMode csir = CsirMode::direct;
  bool interference_limited = false;
  double window_radius = 500.0;
  std::vector<Detector> detectors{Detector::zf, Detector::zf_sic};
  std::optional<SweepSpec> sweep;
  ScalingSpec scaling;

  void set(const std::string& key, const std::string& value);

  /// One SystemConfig per grid point, lambda varying fastest. With local CSIR
  /// and l_cancel unset (0) each point takes L = floor(n_r / n_t) - 1.
  std::vector<SystemConfig> expand() const;

  /// Copy with one grid key replaced by a single value.
  RunFile with(const std::string& key, double value) const;
};

inline void RunFile::set(const std::string& key, const std::string& value) {
  const auto items = split_list(value);
  require(!items.empty(), ErrorKind::config_parse, "key '" + key + "' has no value");
  auto numbers = [&] {
    std::vector<double> v;
    for (const auto& i : items) v.push_back(parse_number(key, i));
    return v;
  };
  auto integers = [&] {
    std::vector<int> v;
    for (const auto& i : items) v.push_back(parse_integer(key, i));
    return v;
  };
  auto single = [&] {
    require(items.size() == 1, ErrorKind::config_parse, "key '" + key + "' takes one value");
    return items.front();
  };
  if (key == "lambda") lambda = numbers();
  else if (key == "alpha") alpha = numbers();
  else if (key == "n_t") n_t = integers();
  else if (key == "n_r") n_r = integers();
  else if (key == "l_cancel") l_cancel = integers();
  else if (key == "antenna_dist") antenna_dist = numbers();
  else if (key == "r_d") r_d = parse_number(key, single());
  else if (key == "power_dbm") power_dbm = parse_number(key, single());
  else if (key == "noise_dbm") noise_dbm = parse_number(key, single());
  else if (key == "csir") csir = parse_csir(single());
  else if (key == "interference_limited") interference_limited = parse_bool(key, single());
  else if (key == "window_radius") window_radius = parse_number(key, single());
  else if (key == "detector") detectors = parse_detectors(single());
  else if (key == "sweep_axis") {
    if (!sweep) sweep = SweepSpec{};
    sweep->axis = single();
  } else if (key == "sweep_values") {
    if (!sweep) sweep = SweepSpec{};
    sweep->values = numbers();
  } else if (key == "beta1") scaling.beta1 = parse_number(key, single());
  else if (key == "beta2") scaling.beta2 = parse_number(key, single());
  else if (key == "c1") scaling.c1 = parse_number(key, single());
  else if (key == "c2") scaling.c2 = parse_number(key, single());
  else if (key == "lambda_log10_lo") scaling.log10_lo = parse_number(key, single());
  else if (key == "lambda_log10_hi") scaling.log10_hi = parse_number(key, single());
  else throw Error(ErrorKind::config_parse, "unknown key '" + key + "'");
}

inline std::vector<SystemConfig> RunFile::expand() const {
  std::vector<SystemConfig> out;
  const std::vector<int> n_t_axis = antenna_dist ? std::vector<int>{0} : n_t;
  for (double a : alpha) {
    for (int nr : n_r) {
      for (int nt : n_t_axis) {
        for (int l : l_cancel) {
          for (double lam : lambda) {
            SystemConfig c;
            c.lambda = lam;
            c.alpha = a;
            c.r_d = r_d;
            c.n_r = nr;
            c.antenna_dist = antenna_dist ? *antenna_dist : point_mass_antennas(nt, nr);
            c.power_dbm = power_dbm;
            c.noise_dbm = noise_dbm;
            c.csir = csir;
            c.interference_limited = interference_limited;
            c.l_cancel = l;
            if (csir == CsirMode::local && l == 0 && !antenna_dist) c.l_cancel = nr / nt - 1;
            c.validate();
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

inline RunFile RunFile::with(const std::string& key, double value) const {
  RunFile copy = *this;
  std::ostringstream text;
  text.precision(17);
  text << value;
  copy.set(key, text.str());
  return copy;
}

inline RunFile parse_run_file(std::istream& in) {
  RunFile run;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::config_parse,
            "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    try {
      run.set(key, trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::config_parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return run;
}

inline RunFile load_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::config_parse, "cannot open config '" + path.string() + "'");
  return parse_run_file(in);
}

/// "name=v1,v2,..." as given on the command line.
inline SweepSpec parse_sweep_argument(const std::string& text) {
  const auto eq = text.find('=');
  require(eq != std::string::npos, ErrorKind::config_parse, "sweep must look like name=v1,v2,...");
  SweepSpec spec;
  spec.axis = trim(text.substr(0, eq));
  for (const auto& item : split_list(text.substr(eq + 1))) spec.values.push_back(parse_number(spec.axis, item));
  return spec;
}

// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Appends rows to `path`, writing the header first when the file is new or
/// empty. An empty path means standard output.
class CsvSink {
 public:
  CsvSink(std::filesystem::path path, std::vector<std::string> header)
      : path_(std::move(path)), header_(std::move(header)) {}

  void write(const std::vector<std::string>& row) {
    require(row.size() == header_.size(), ErrorKind::domain, "row width does not match the header");
    std::string line;
    if (!started_) {
      started_ = true;
      bool need_header = true;
      if (!path_.empty()) {
        std::error_code ec;
        need_header = !std::filesystem::exists(path_, ec) || std::filesystem::file_size(path_, ec) == 0;
      }
      if (need_header) line += join(header_);
    }
    line += join(row);
    if (path_.empty()) {
      std::fputs(line.c_str(), stdout);
      std::fflush(stdout);
    } else {
      std::ofstream out(path_, std::ios::app);
      require(static_cast<bool>(out), ErrorKind::invalid_config, "cannot write '" + path_.string() + "'");
      out << line;
    }
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    return s + '\n';
  }

  std::filesystem::path path_;
  std::vector<std::string> header_;
  bool started_ = false;
};

}  // namespace mimonet::io

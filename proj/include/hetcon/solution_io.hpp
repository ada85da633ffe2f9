#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hetcon/errors.hpp"
#include "hetcon/mesh.hpp"

namespace hetcon {

// Locale-independent shortest round-trip formatting.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  // keep a decimal point or exponent so values read back as floating point
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc())
    throw ConfigError("malformed number '" + s + "'");
  return v;
}

// Plain-text solution file, also the restart format:
//   header: n_d NTST m n_params
//   n_params lines: name value
//   N*m+1 lines: tau v_1 ... v_{n_d}
inline void write_solution(std::ostream& os, const MeshedSolution& sol) {
  os << sol.n_dim() << ' ' << sol.n_intervals() << ' ' << sol.degree() << ' '
     << sol.params.size() << '\n';
  for (int i = 0; i < sol.params.size(); ++i) {
    std::string nm = i < int(sol.param_names.size()) ? sol.param_names[i]
                                                     : ("p" + std::to_string(i));
    os << nm << ' ' << format_double(sol.params[i]) << '\n';
  }
  for (int k = 0; k < sol.n_points(); ++k) {
    os << format_double(sol.point_tau(k));
    for (int a = 0; a < sol.n_dim(); ++a) os << ' ' << format_double(sol.values()(a, k));
    os << '\n';
  }
}

inline void write_solution_file(const std::string& path, const MeshedSolution& sol) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_solution(os, sol);
}

inline MeshedSolution read_solution(std::istream& is) {
  int n_dim = 0, ntst = 0, m = 0, n_params = 0;
  if (!(is >> n_dim >> ntst >> m >> n_params))
    throw ConfigError("solution file: malformed header");
  if (n_dim < 1 || ntst < 1 || m < 1 || n_params < 0)
    throw ConfigError("solution file: invalid header values");

  std::vector<std::string> names(n_params);
  Eigen::VectorXd params(n_params);
  for (int i = 0; i < n_params; ++i) {
    std::string value;
    if (!(is >> names[i] >> value))
      throw ConfigError("solution file: truncated parameter block");
    params[i] = parse_double(value);
  }

  int n_points = ntst * m + 1;
  std::vector<double> taus(n_points);
  Eigen::MatrixXd vals(n_dim, n_points);
  for (int k = 0; k < n_points; ++k) {
    std::string tok;
    if (!(is >> tok)) throw ConfigError("solution file: truncated point block");
    taus[k] = parse_double(tok);
    for (int a = 0; a < n_dim; ++a) {
      if (!(is >> tok)) throw ConfigError("solution file: truncated point row");
      vals(a, k) = parse_double(tok);
    }
  }

  std::vector<double> knots(ntst + 1);
  for (int j = 0; j <= ntst; ++j) knots[j] = taus[std::min(j * m, n_points - 1)];
  knots.front() = 0.0;
  knots.back() = 1.0;

  MeshedSolution sol(knots, m, n_dim);
  sol.values() = vals;
  sol.params = params;
  sol.param_names = names;
  return sol;
}

inline MeshedSolution read_solution_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open solution file '" + path + "'");
  return read_solution(is);
}

}  // namespace hetcon

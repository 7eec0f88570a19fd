#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace zeta4::cli {

using json = nlohmann::ordered_json;

struct Params {
  std::string format = "json";
  std::string out;

  double t = 0.0;
  double T = 0.0;
  double U = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.01;
  double grid = 0.05;
  double tol = 1e-8;
  double eps = 0.01;
  double eta = 0.05;
  double delta = 0.0;
  double gamma = 0.0;
  double tan = 0.0;
  double n = 0.0;
  double m = 0.0;
  double chord_tol = 0.2;
  double ceiling = 5e4;
  int terms = 4;
  std::size_t budget = 10'000'000;
  std::string convention = "anchor-log";
  std::string mode = "s3";
  std::string curve;
  std::string sidecar;
  std::string samples_in;
  std::string samples_out;
  std::vector<double> lengths;
  std::vector<double> heights;
  bool adaptive_only = false;
  bool drop_leading = false;
  bool allow_drift = false;
};

// Each command writes its data (a JSON "result" object, or CSV rows) to out.
// For JSON the caller wraps the result with the command name, version and
// resolved configuration.
json cmd_theta(const Params& p);
json cmd_z(const Params& p);
json cmd_zeros(const Params& p, std::ostream* csv);
json cmd_moment(const Params& p);
json cmd_laplace(const Params& p);
json cmd_fit(const Params& p);
json cmd_ladder(const Params& p, std::ostream* csv);
json cmd_chords(const Params& p, std::ostream* csv);
json cmd_inflect(const Params& p);
json cmd_gamma_bar(const Params& p);
json cmd_rotate(const Params& p, std::ostream* csv);
json cmd_verify(const Params& p);

}  // namespace zeta4::cli

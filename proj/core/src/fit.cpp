#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "zeta4/errors.hpp"
#include "zeta4/quad.hpp"

namespace zeta4 {

namespace {

using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr long double kMaxCondition = 1e14L;

}  // namespace

double MomentFit::evaluate(double T) const {
  const long double l = std::log(static_cast<long double>(T));
  long double acc = 0.0L;
  for (double c : coeffs) acc = acc * l + c;
  return static_cast<double>(acc * T);
}

MomentFit fit_moment_polynomial(std::span<const MomentSample> samples, bool drop_leading) {
  if (samples.size() < 8) fail(ErrorKind::Domain, "fit_moment_polynomial: needs at least 8 samples");
  std::set<double> distinct;
  double lo = samples.front().T;
  double hi = lo;
  for (const auto& s : samples) {
    if (!std::isfinite(s.T) || s.T <= 1.0 || !std::isfinite(s.value)) {
      fail(ErrorKind::Domain, "fit_moment_polynomial: samples need finite T > 1 and finite values");
    }
    distinct.insert(s.T);
    lo = std::min(lo, s.T);
    hi = std::max(hi, s.T);
  }
  if (distinct.size() != samples.size()) fail(ErrorKind::Domain, "fit_moment_polynomial: sample heights must be distinct");
  if (hi < 10.0 * lo) fail(ErrorKind::Domain, "fit_moment_polynomial: samples must span at least one decade");

  const int first_power = drop_leading ? 3 : 4;
  const int cols = first_power + 1;
  const auto rows = static_cast<Eigen::Index>(samples.size());
  Matrix design(rows, cols);
  Vector rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const long double l = std::log(static_cast<long double>(samples[i].T));
    for (int j = 0; j < cols; ++j) design(i, j) = std::pow(l, first_power - j);
    rhs(i) = static_cast<long double>(samples[i].value) / samples[i].T;
  }

  // Column scaling keeps the conditioning estimate meaningful.
  Vector scale(cols);
  for (int j = 0; j < cols; ++j) {
    scale(j) = design.col(j).norm();
    design.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const long double condition = sv(0) / sv(sv.size() - 1);
  if (!(condition < kMaxCondition)) {
    std::ostringstream msg;
    msg << "fit_moment_polynomial: design matrix condition " << static_cast<double>(condition)
        << " too large; samples too clustered";
    fail(ErrorKind::Conditioning, msg.str(), static_cast<double>(condition));
  }
  const Vector solution = svd.solve(rhs).cwiseQuotient(scale);

  MomentFit fit;
  fit.leading_dropped = drop_leading;
  for (int j = 0; j < cols; ++j) fit.coeffs[4 - first_power + j] = static_cast<double>(solution(j));
  long double rss = 0.0L;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const long double l = std::log(static_cast<long double>(samples[i].T));
    long double fitted = 0.0L;
    for (int j = 0; j < cols; ++j) fitted += solution(j) * std::pow(l, first_power - j);
    const long double r = fitted - rhs(i);
    rss += r * r;
  }
  fit.residual_rms = static_cast<double>(std::sqrt(rss / rows));
  fit.sample_range = {lo, hi};
  return fit;
}

std::vector<MomentSample> moment_samples(std::span<const double> heights, double tol, const QuadConfig& config) {
  std::vector<double> sorted(heights.begin(), heights.end());
  if (!std::is_sorted(sorted.begin(), sorted.end())) fail(ErrorKind::Domain, "moment_samples: heights must ascend");
  std::vector<MomentSample> out;
  double from = 1.0;
  double running = 0.0;
  double err = 0.0;
  for (double T : sorted) {
    if (!(T > from)) fail(ErrorKind::Domain, "moment_samples: heights must be > 1 and distinct");
    const MomentEstimate piece = integrate_z4(from, T - from, tol, config);
    running += piece.value;
    err += piece.err_bound;
    out.push_back({T, running, err});
    from = T;
  }
  return out;
}

void write_samples_csv(std::ostream& out, std::span<const MomentSample> samples) {
  const auto old = out.precision(17);
  out << "T,value,err_bound\n";
  for (const auto& s : samples) out << s.T << ',' << s.value << ',' << s.err_bound << '\n';
  out.precision(old);
}

std::vector<MomentSample> read_samples_csv(std::istream& in) {
  std::vector<MomentSample> out;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Domain, "samples CSV: missing header");
  if (line.rfind("T,value", 0) != 0) fail(ErrorKind::Domain, "samples CSV: header must start with T,value");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    MomentSample s;
    char comma = 0;
    if (!(row >> s.T >> comma >> s.value) || comma != ',') {
      fail(ErrorKind::Domain, "samples CSV: malformed row " + std::to_string(lineno));
    }
    if (row >> comma && comma == ',') row >> s.err_bound;
    out.push_back(s);
  }
  return out;
}

}  // namespace zeta4

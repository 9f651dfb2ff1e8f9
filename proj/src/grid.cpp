#include "qreg/grid.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qreg/error.hpp"

namespace qreg {

double GridSpec::spacing() const {
  return points > 1 ? (q_max - q_min) / static_cast<double>(points - 1) : 0.0;
}

std::vector<double> GridSpec::coordinates() const {
  std::vector<double> q(points);
  const double h = spacing();
  for (std::size_t i = 0; i < points; ++i) q[i] = q_min + static_cast<double>(i) * h;
  if (points > 1) q.back() = q_max;
  return q;
}

GridSpec GridSpec::halved() const {
  const double h = 0.5 * spacing();
  return {left_wall() + h, right_wall() - h, 2 * points + 1};
}

void GridSpec::validate() const {
  require(points >= 2, ErrorKind::Domain, "grid: at least 2 points required");
  require(std::isfinite(q_min) && std::isfinite(q_max), ErrorKind::Domain, "grid: non-finite bounds");
  require(q_max > q_min, ErrorKind::Domain, "grid: qmax must exceed qmin");
  const double h = spacing();
  require(q_min > 0.0 && q_min >= 0.5 * h * (1.0 - 1e-12), ErrorKind::Domain,
          "grid: qmin must be >= h/2 > 0 (grid may not touch q = 0)");
}

GridSpec GridSpec::box(double length, std::size_t points) {
  require(std::isfinite(length) && length > 0.0, ErrorKind::Domain, "grid: box length must be positive");
  require(points >= 2, ErrorKind::Domain, "grid: at least 2 points required");
  const double h = length / static_cast<double>(points + 1);
  return {h, length - h, points};
}

GridSpec GridSpec::parse(std::string_view text) {
  auto bad = [&] { fail(ErrorKind::InvalidInput, "grid must have the form qmin:qmax:N, got '" + std::string(text) + "'"); };
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) bad();
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) bad();

  auto to_double = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad();
    return v;
  };
  GridSpec spec;
  spec.q_min = to_double(text.substr(0, c1));
  spec.q_max = to_double(text.substr(c1 + 1, c2 - c1 - 1));
  const auto n_text = text.substr(c2 + 1);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc() || ptr != n_text.data() + n_text.size()) bad();
  spec.points = n;
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorKind::InvalidInput, e.what());
  }
  return spec;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << q_min << ':' << q_max << ':' << points;
  return os.str();
}

SampledField::SampledField(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(grid_.size() >= 2, ErrorKind::Domain, "field: at least 2 samples required");
  require(grid_.size() == values_.size(), ErrorKind::Domain, "field: grid and values differ in length");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    require(std::isfinite(grid_[i]) && std::isfinite(values_[i]), ErrorKind::Domain,
            "field: non-finite coordinate or value");
  }
  spacing_ = (grid_.back() - grid_.front()) / static_cast<double>(grid_.size() - 1);
  require(spacing_ > 0.0, ErrorKind::Domain, "field: grid must be strictly increasing");
  const double tol = 1e-8 * spacing_;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    require(std::fabs(grid_[i] - grid_[i - 1] - spacing_) <= tol, ErrorKind::Domain,
            "field: grid must be uniform and strictly increasing");
  }
  require(grid_.front() > 0.0 && grid_.front() >= 0.5 * spacing_ * (1.0 - 1e-12), ErrorKind::Domain,
          "field: first coordinate must be >= h/2 > 0");
}

SampledField SampledField::with_values(std::vector<double> values) const {
  return SampledField(grid_, std::move(values));
}

SampledField SampledField::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return with_values(std::move(v));
}

namespace numerics {

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);

  // Simpson over an even number of intervals; 3/8 rule on the tail otherwise.
  const std::size_t intervals = n - 1;
  const std::size_t simpson_end = intervals % 2 == 0 ? n - 1 : n - 4;
  double sum = f[0] + f[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  double total = h / 3.0 * sum;
  if (simpson_end != n - 1) {
    const std::size_t j = simpson_end;
    total += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return total;
}

double wall_trapezoid(std::span<const double> f, double h) {
  double sum = 0.0;
  for (double v : f) sum += v;
  return h * sum;
}

std::vector<double> gradient(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / h;
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double second_difference(std::span<const double> f, double h, std::size_t i) {
  return (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h);
}

double second_derivative_6(std::span<const double> f, double h, std::size_t i) {
  // Weights (2, -27, 270, -490, 270, -27, 2) / 180.
  const double s = 2.0 * (f[i - 3] + f[i + 3]) - 27.0 * (f[i - 2] + f[i + 2]) +
                   270.0 * (f[i - 1] + f[i + 1]) - 490.0 * f[i];
  return s / (180.0 * h * h);
}

}  // namespace numerics

}  // namespace qreg

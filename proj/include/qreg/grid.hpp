#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qreg {

/// Uniform grid q_i = q_min + i h, i = 0..points-1, on the positive axis.
///
/// Eigenproblems put Dirichlet walls one spacing outside the grid, at
/// q_min - h and q_max + h.
struct GridSpec {
  double q_min = 0.0;
  double q_max = 0.0;
  std::size_t points = 0;

  double spacing() const;
  double left_wall() const { return q_min - spacing(); }
  double right_wall() const { return q_max + spacing(); }
  std::vector<double> coordinates() const;

  /// Same walls, half the spacing (2 points + 1 nodes).
  GridSpec halved() const;

  /// Throws Domain unless points >= 2, 0 < h/2 <= q_min < q_max, all finite.
  void validate() const;

  /// Interior nodes of the box (0, length) with walls at 0 and length.
  static GridSpec box(double length, std::size_t points);

  /// Parses "qmin:qmax:N".
  static GridSpec parse(std::string_view text);

  std::string to_string() const;
};

/// Real amplitude samples X(q_i) on a uniform positive grid.
class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<double> grid, std::vector<double> values);

  template <class F>
  static SampledField sample(const GridSpec& spec, F&& f) {
    spec.validate();
    std::vector<double> q = spec.coordinates();
    std::vector<double> x(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) x[i] = f(q[i]);
    return SampledField(std::move(q), std::move(x));
  }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  double spacing() const { return spacing_; }
  GridSpec spec() const { return {grid_.front(), grid_.back(), grid_.size()}; }

  SampledField with_values(std::vector<double> values) const;
  SampledField scaled(double factor) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  double spacing_ = 0.0;
};

namespace numerics {

/// Composite Simpson rule; an even number of samples closes with the 3/8
/// rule on the last three intervals.
double simpson(std::span<const double> f, double h);

/// h * sum(f): the trapezoid rule for samples that vanish at the walls
/// q_min - h and q_max + h. This is the measure under which eigenvectors of
/// the finite-difference operator are orthogonal.
double wall_trapezoid(std::span<const double> f, double h);

/// First derivative: central in the interior, second-order one-sided at ends.
std::vector<double> gradient(std::span<const double> f, double h);

/// Three-point second difference at interior index i.
double second_difference(std::span<const double> f, double h, std::size_t i);

/// Seven-point, sixth-order central second derivative at index i (3 <= i < n-3).
double second_derivative_6(std::span<const double> f, double h, std::size_t i);

}  // namespace numerics

}  // namespace qreg

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace osg {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Uniform sampling lattice. The right endpoint is excluded, matching the
// periodic convention of the discrete spectral kernels: node i sits at
// x_min + i*dx with dx = (x_max - x_min)/points. The same container serves
// position and momentum axes; field names follow the position use.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;

  double dx() const { return (x_max - x_min) / static_cast<double>(points); }
  double node(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

  std::vector<double> nodes() const {
    std::vector<double> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) out.push_back(node(i));
    return out;
  }

  bool covers(double lo, double hi) const { return x_min <= lo && hi <= x_max; }

  void validate(const std::string& name = "grid") const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
      throw InvalidParameter(name, "needs finite bounds with x_max > x_min");
    if (points < 64 || !is_power_of_two(points))
      throw InvalidParameter(name + ".points", "must be a power of two, at least 64");
  }
};

// Rectangular phase-space lattice.
struct Grid2D {
  Grid1D x;
  Grid1D p;

  std::size_t size() const { return x.points * p.points; }

  void validate(const std::string& name = "grid") const {
    x.validate(name + ".x");
    p.validate(name + ".p");
  }
};

// Trapezoidal quadrature over samples on a uniform lattice.
template <typename T>
T trapezoid(const std::vector<T>& f, double dx) {
  if (f.size() < 2) return T{};
  T s = (f.front() + f.back()) / 2.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

}  // namespace osg

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "constants.hpp"
#include "grid.hpp"

namespace osg {

using Complex = std::complex<double>;
using ComplexSampleArray = std::vector<Complex>;

// A real-valued profile sampled on a 1D grid, e.g. a position density.
struct DensityProfile {
  Grid1D grid;
  std::vector<double> values;

  double integral() const { return trapezoid(values, grid.dx()); }
};

struct PhaseSpacePoint {
  double x = 0.0;
  double p = 0.0;
};

// Selects which distribution sample_wigner evaluates.
enum class WignerKind {
  reduced,            // field traced out, equal-weight branch mixture
  conditioned_zero,   // post-selected on zero photons at the exit
  conditioned_one,    // post-selected on one photon at the exit
  branch_plus,        // single branch, weight 1/2
  branch_minus,       // single branch, weight 1/2
  interference_only,  // oscillatory cross term alone; signed, integrates to Re<+|->
};

// Wigner samples on a tensor grid, stored x-major: value(i, j) is the sample
// at (grid.x.node(i), grid.p.node(j)).
struct WignerField {
  Grid2D grid;
  std::vector<double> values;

  double& value(std::size_t i, std::size_t j) { return values[i * grid.p.points + j]; }
  double value(std::size_t i, std::size_t j) const { return values[i * grid.p.points + j]; }

  // Trapezoid in both directions; for the distributions here, equal to the
  // trace of the corresponding (sub)ensemble when the grid captures it.
  double integral() const {
    const std::size_t nx = grid.x.points, np = grid.p.points;
    std::vector<double> row(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      std::vector<double> slice(values.begin() + static_cast<std::ptrdiff_t>(i * np),
                                values.begin() + static_cast<std::ptrdiff_t>((i + 1) * np));
      row[i] = trapezoid(slice, grid.p.dx());
    }
    return trapezoid(row, grid.x.dx());
  }

  double min_value() const {
    double m = values.empty() ? 0.0 : values.front();
    for (double v : values) m = std::min(m, v);
    return m;
  }

  // Integrates out momentum, giving a position profile on grid.x.
  DensityProfile x_marginal() const {
    const std::size_t nx = grid.x.points, np = grid.p.points;
    DensityProfile out{grid.x, std::vector<double>(nx, 0.0)};
    for (std::size_t i = 0; i < nx; ++i) {
      std::vector<double> slice(values.begin() + static_cast<std::ptrdiff_t>(i * np),
                                values.begin() + static_cast<std::ptrdiff_t>((i + 1) * np));
      out.values[i] = trapezoid(slice, grid.p.dx());
    }
    return out;
  }

  // Integrates out position, giving a momentum profile on grid.p.
  DensityProfile p_marginal() const {
    const std::size_t nx = grid.x.points, np = grid.p.points;
    DensityProfile out{grid.p, std::vector<double>(np, 0.0)};
    for (std::size_t j = 0; j < np; ++j) {
      std::vector<double> slice(nx);
      for (std::size_t i = 0; i < nx; ++i) slice[i] = value(i, j);
      out.values[j] = trapezoid(slice, grid.x.dx());
    }
    return out;
  }
};

}  // namespace osg

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "constants.hpp"
#include "fields.hpp"
#include "grid.hpp"

namespace osg {

// Owns one kissfft backend. The propagator keeps a single instance alive for
// an entire evolution so plans and twiddle tables are built once per size.
// Eigen's convention: fwd uses e^{-2 pi i k n / N}, inv includes the 1/N.
class Dft {
 public:
  void forward(const ComplexSampleArray& in, ComplexSampleArray& out) { engine_.fwd(out, in); }
  void inverse(const ComplexSampleArray& in, ComplexSampleArray& out) { engine_.inv(out, in); }

 private:
  Eigen::FFT<double> engine_;
};

// Momentum lattice conjugate to an n-point position grid of spacing dx, in
// DFT (natural) order: p_j = 2 pi hbar j / (n dx) for j < n/2 and the
// negative-frequency mirror for j >= n/2.
inline std::vector<double> dft_momenta(std::size_t n, double dx) {
  std::vector<double> p(n);
  const double unit = 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<double>(j < (n + 1) / 2 ? static_cast<std::ptrdiff_t>(j)
                                                        : static_cast<std::ptrdiff_t>(j) -
                                                              static_cast<std::ptrdiff_t>(n));
    p[j] = unit * jj;
  }
  return p;
}

// Continuum momentum amplitudes phi(p_j) of samples psi_i on grid, in the
// convention phi(p) = (2 pi hbar)^{-1/2} Integral psi(x) e^{-i p x / hbar} dx.
// The DFT indexes from the grid origin, hence the e^{-i p x_min / hbar}
// anchor phase. Returned in the same natural order as dft_momenta.
inline ComplexSampleArray continuum_p_amplitudes(const ComplexSampleArray& psi, const Grid1D& grid,
                                                 Dft& dft) {
  ComplexSampleArray out;
  dft.forward(psi, out);
  const auto p = dft_momenta(psi.size(), grid.dx());
  const double amp = grid.dx() / std::sqrt(2.0 * std::numbers::pi * hbar);
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] *= amp * std::exp(Complex(0.0, -p[j] * grid.x_min / hbar));
  return out;
}

}  // namespace osg

#include "bq/param.hpp"

#include <cmath>

namespace bq {

RealVector pack(const Matrix& z) {
  RealVector x(2 * z.size());
  pack_into(z, x, 0);
  return x;
}

void pack_into(const Matrix& z, RealVector& x, Eigen::Index offset) {
  const Eigen::Index n = z.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    x(offset + k) = z.data()[k].real();
    x(offset + n + k) = z.data()[k].imag();
  }
}

Matrix unpack(const RealVector& x, Eigen::Index offset, int rows, int cols) {
  Matrix z(rows, cols);
  const Eigen::Index n = z.size();
  for (Eigen::Index k = 0; k < n; ++k) z.data()[k] = cplx(x(offset + k), x(offset + n + k));
  return z;
}

Matrix DensityParam::state(const RealVector& x) const {
  const Matrix g = unpack(x, 0, dim_, dim_);
  Matrix m = g * g.adjoint();
  m.diagonal().array() += eps_;
  return m / m.trace().real();
}

RealVector DensityParam::pullback(const RealVector& x, const Matrix& w) const {
  const Matrix g = unpack(x, 0, dim_, dim_);
  Matrix m = g * g.adjoint();
  m.diagonal().array() += eps_;
  const double tr = m.trace().real();
  const Matrix sigma = m / tr;
  Matrix wp = w;
  wp.diagonal().array() -= (w * sigma).trace().real();
  wp /= tr;
  return pack(2.0 * wp * g);
}

RealVector DensityParam::from_state(const Matrix& sigma) const {
  return pack(psd_sqrt(0.5 * (sigma + sigma.adjoint())));
}

namespace {

double inv_sqrt(double s) { return 1.0 / std::sqrt(std::max(s, 1e-300)); }
double d_inv_sqrt(double s) { return -0.5 * std::pow(std::max(s, 1e-300), -1.5); }

}  // namespace

Matrix IsometryParam::isometry(const RealVector& x) const {
  const Matrix g = unpack(x, 0, rows_, cols_);
  const Spectrum spec = hermitian_eig(g.adjoint() * g, 1e-6);
  return g * apply_function(spec, inv_sqrt);
}

RealVector IsometryParam::pullback(const RealVector& x, const Matrix& grad_u) const {
  const Matrix g = unpack(x, 0, rows_, cols_);
  const Spectrum spec = hermitian_eig(g.adjoint() * g, 1e-6);
  const Matrix t = apply_function(spec, inv_sqrt);
  Matrix h = grad_u.adjoint() * g;
  h = (0.5 * (h + h.adjoint())).eval();
  const Matrix b = spectral_derivative(spec, inv_sqrt, d_inv_sqrt, h);
  return pack(grad_u * t + 2.0 * g * b);
}

}  // namespace bq

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace invsep {

using Vector = Eigen::VectorXd;
/// Dense real matrix. Square inputs to the eigensolver are capped at 8x8.
using Matrix = Eigen::MatrixXd;

/// Right-hand side x' = f(t, x).
using VectorField = std::function<Vector(double, const Vector&)>;
using VectorMap = std::function<Vector(const Vector&)>;

struct Sample {
  double t;
  Vector x;
};
using SampledTrajectory = std::vector<Sample>;

inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr int kMaxEigenDimension = 8;

/// One classical Runge-Kutta step.
Vector rk4_step(const VectorField& field, double t, const Vector& x, double dt);

/// Fixed-step RK4 from t0 to t1. The last step is shortened so the final
/// sample lands exactly on t1. Throws DivergenceError on non-finite state.
SampledTrajectory integrate_rk4(const VectorField& field, const Vector& x0,
                                double t0, double t1, double dt);

/// Central-difference Jacobian of map at point.
Matrix jacobian_fd(const VectorMap& map, const Vector& point,
                   double step = kDefaultFdStep);

/// Eigenvalue multiset, sorted by (real, imag) for stable output.
using Spectrum = std::vector<std::complex<double>>;

/// All eigenvalues of a real square matrix of size <= 8, via Householder
/// reduction to Hessenberg form and Francis double-shift QR.
Spectrum eigenvalues(const Matrix& m);

double spectral_abscissa(const Matrix& m);

/// Greedy minimal-distance matching of two multisets; returns the largest
/// matched distance. Sizes must agree.
double spectrum_mismatch(const Spectrum& a, const Spectrum& b);

Spectrum spectrum_union(const Spectrum& a, const Spectrum& b);

/// Largest Frobenius-norm difference between any two matrices in the list.
double max_pairwise_deviation(const std::vector<Matrix>& matrices);

}  // namespace invsep

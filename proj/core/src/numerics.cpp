#include "invsep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "invsep/errors.hpp"

namespace invsep {

Vector rk4_step(const VectorField& field, double t, const Vector& x, double dt) {
  const Vector k1 = field(t, x);
  const Vector k2 = field(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vector k3 = field(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vector k4 = field(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SampledTrajectory integrate_rk4(const VectorField& field, const Vector& x0,
                                double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be > 0");
  if (!(t1 > t0)) throw std::invalid_argument("integrate_rk4: t1 must be > t0");

  SampledTrajectory out;
  out.reserve(static_cast<std::size_t>((t1 - t0) / dt) + 2);
  out.push_back({t0, x0});

  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    // Snap to t1 when within rounding of the grid.
    if (t >= t1 - 1e-12 * std::max(1.0, std::abs(t1))) break;
    const double h = std::min(dt, t1 - t);
    x = rk4_step(field, t, x, h);
    const double t_next = (t + h >= t1 - 1e-12 * std::max(1.0, std::abs(t1))) ? t1 : t + h;
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << "integrate_rk4: non-finite state at t = " << t_next;
      throw DivergenceError(msg.str(), t_next);
    }
    out.push_back({t_next, x});
  }
  return out;
}

Matrix jacobian_fd(const VectorMap& map, const Vector& point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("jacobian_fd: step must be > 0");
  Matrix jac;
  Vector probe = point;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    probe[j] = point[j] + step;
    const Vector plus = map(probe);
    probe[j] = point[j] - step;
    const Vector minus = map(probe);
    probe[j] = point[j];
    if (!plus.allFinite() || !minus.allFinite()) {
      throw Error("jacobian_fd: map returned a non-finite value");
    }
    if (j == 0) jac.resize(plus.size(), point.size());
    jac.col(j) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

namespace {

// In-place Householder reduction to upper Hessenberg form.
void reduce_to_hessenberg(Matrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Vector v = a.col(k).tail(len);
    const double alpha = v.norm();
    if (alpha == 0.0) continue;
    v[0] += (v[0] >= 0.0 ? alpha : -alpha);
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    auto rows = a.bottomRows(len);
    rows -= 2.0 * v * (v.transpose() * rows);
    auto cols = a.rightCols(len);
    cols -= 2.0 * (cols * v) * v.transpose();
    a.col(k).tail(len - 1).setZero();
  }
}

double sign_of(double magnitude, double sign_source) {
  return sign_source >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr
// ordering). Indices are 1-based internally to follow the classical loop
// structure; h is (n+1)x(n+1) with row/col 0 unused.
Spectrum hessenberg_qr(Matrix h, int n) {
  std::vector<double> wr(n + 1, 0.0);
  std::vector<double> wi(n + 1, 0.0);

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(h(i, j));

  int nn = n;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) + s == s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      x = h(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        y = h(nn - 1, nn - 1);
        w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (its == 60) throw Error("eigenvalues: QR iteration did not converge");
          if (its == 10 || its == 20 || its == 40) {
            // Exceptional shift.
            t += x;
            for (int i = 1; i <= nn; ++i) h(i, i) -= x;
            s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = h(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - r - s;
            r = h(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = h(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) h(k, k - 1) = -h(k, k - 1);
              } else {
                h(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = h(k, j) + q * h(k + 1, j);
                if (k != nn - 1) {
                  p += r * h(k + 2, j);
                  h(k + 2, j) -= p * z;
                }
                h(k + 1, j) -= p * y;
                h(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * h(i, k) + y * h(i, k + 1);
                if (k != nn - 1) {
                  p += z * h(i, k + 2);
                  h(i, k + 2) -= p * r;
                }
                h(i, k + 1) -= p * q;
                h(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }

  Spectrum out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

bool spectrum_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

Spectrum eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
  if (m.rows() > kMaxEigenDimension) {
    throw std::invalid_argument("eigenvalues: matrix larger than 8x8");
  }
  if (!m.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entry");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return {};

  Matrix a = m;
  reduce_to_hessenberg(a);
  Matrix h = Matrix::Zero(n + 1, n + 1);
  h.bottomRightCorner(n, n) = a;

  Spectrum values = hessenberg_qr(std::move(h), n);
  std::sort(values.begin(), values.end(), spectrum_less);
  return values;
}

double spectral_abscissa(const Matrix& m) {
  const Spectrum values = eigenvalues(m);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& lambda : values) best = std::max(best, lambda.real());
  return best;
}

double spectrum_mismatch(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("spectrum_mismatch: multisets differ in size");
  }
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& lambda : a) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(lambda - b[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

Spectrum spectrum_union(const Spectrum& a, const Spectrum& b) {
  Spectrum out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(), spectrum_less);
  return out;
}

double max_pairwise_deviation(const std::vector<Matrix>& matrices) {
  double worst = 0.0;
  for (std::size_t i = 0; i < matrices.size(); ++i)
    for (std::size_t j = i + 1; j < matrices.size(); ++j)
      worst = std::max(worst, (matrices[i] - matrices[j]).norm());
  return worst;
}

}  // namespace invsep

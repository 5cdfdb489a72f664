// Copyright 2026 The csanon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csanon/lpc.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace csanon {

namespace {

using Complex = std::complex<double>;

constexpr double kConjugateTolerance = 1e-9;
constexpr double kStabilityRadius = 1.0 - 1e-6;
constexpr double kMinPhase = 1e-9;
constexpr double kMaxPhase = std::numbers::pi - 1e-9;
constexpr int kPolishIterations = 3;

// Parlett-Reinsch balancing: scales rows and columns by powers of two until
// their norms are within a factor of gamma of each other.
void Balance(Eigen::MatrixXd* matrix) {
  Eigen::MatrixXd& m = *matrix;
  const int n = static_cast<int>(m.rows());
  const double gamma = 0.9;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double col = m.col(i).lpNorm<1>() - std::fabs(m(i, i));
      const double row = m.row(i).lpNorm<1>() - std::fabs(m(i, i));
      if (col == 0.0 || row == 0.0) continue;
      const double s = col + row;
      double f = 1.0;
      double c = col;
      while (c < row / 2.0) {
        c *= 2.0;
        f *= 2.0;
      }
      while (c >= row * 2.0) {
        c /= 2.0;
        f /= 2.0;
      }
      if (c + row / f < gamma * s) {
        changed = true;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

// Evaluates the monic polynomial z^p + a1 z^(p-1) + ... + ap and its
// derivative by Horner's rule.
void Evaluate(std::span<const double> a, Complex z, Complex* value,
              Complex* derivative) {
  Complex p = 1.0;
  Complex dp = 0.0;
  for (double c : a) {
    dp = dp * z + p;
    p = p * z + c;
  }
  *value = p;
  *derivative = dp;
}

Complex Polish(std::span<const double> a, Complex root, bool keep_real) {
  Complex value, derivative;
  Evaluate(a, root, &value, &derivative);
  for (int it = 0; it < kPolishIterations; ++it) {
    if (value == 0.0 || derivative == 0.0) break;
    Complex next = root - value / derivative;
    if (keep_real) next = next.real();
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    if (!keep_real && next.imag() <= 0.0) break;
    Complex next_value, next_derivative;
    Evaluate(a, next, &next_value, &next_derivative);
    if (std::abs(next_value) >= std::abs(value)) break;
    root = next;
    value = next_value;
    derivative = next_derivative;
  }
  return root;
}

bool PhaseLess(const Complex& x, const Complex& y) {
  const double ax = std::arg(x), ay = std::arg(y);
  if (ax != ay) return ax < ay;
  return std::abs(x) < std::abs(y);
}

}  // namespace

std::vector<double> Autocorrelate(std::span<const double> frame, int order) {
  if (order < 0 || static_cast<size_t>(order) >= frame.size()) {
    throw Error("Autocorrelate: order must be below the frame length");
  }
  std::vector<double> r(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double sum = 0.0;
    for (size_t t = 0; t + k < frame.size(); ++t) sum += frame[t] * frame[t + k];
    r[k] = sum;
  }
  return r;
}

std::optional<LpcModel> LevinsonDurbin(std::span<const double> r) {
  if (r.empty() || !(r[0] > 0.0)) return std::nullopt;
  const int order = static_cast<int>(r.size()) - 1;
  std::vector<double> a;
  a.reserve(order);
  double error = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += a[j - 1] * r[i - j];
    const double k = -acc / error;
    if (!(std::fabs(k) < 1.0)) break;
    std::vector<double> next(i);
    for (int j = 1; j < i; ++j) next[j - 1] = a[j - 1] + k * a[i - j - 1];
    next[i - 1] = k;
    a = std::move(next);
    error *= 1.0 - k * k;
  }
  if (a.empty()) return std::nullopt;
  return LpcModel{std::move(a), std::max(error, 0.0)};
}

PoleSet LpcToPoles(const LpcModel& model, int frame_index) {
  const std::span<const double> a(model.coefficients);
  const int p = model.order();
  PoleSet result;
  if (p == 0) return result;
  double norm = 0.0;
  for (double c : a) {
    if (!std::isfinite(c)) {
      throw RootFindingError("non-finite predictor coefficient", frame_index);
    }
    norm += c * c;
  }
  norm = std::sqrt(norm);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) companion(0, j) = -a[j];
  for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Balance(&companion);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw RootFindingError("companion eigen solver did not converge",
                           frame_index);
  }
  const Eigen::VectorXcd eig = solver.eigenvalues();

  std::vector<Complex> upper, lower, real;
  for (int i = 0; i < p; ++i) {
    const Complex z = eig[i];
    if (z.imag() > 0.0) {
      upper.push_back(z);
    } else if (z.imag() < 0.0) {
      lower.push_back(z);
    } else {
      real.push_back(z);
    }
  }
  // The real Schur form yields exact conjugate pairs; anything else means the
  // solver output cannot be trusted.
  if (upper.size() != lower.size()) {
    throw RootFindingError("eigenvalues are not conjugate-closed", frame_index);
  }

  for (Complex& z : upper) z = Polish(a, z, false);
  for (Complex& z : real) z = Polish(a, z, true);
  std::sort(upper.begin(), upper.end(), PhaseLess);
  std::sort(real.begin(), real.end(),
            [](const Complex& x, const Complex& y) { return x.real() > y.real(); });

  const double tolerance = 1e-6 * std::max(1.0, norm);
  result.poles.reserve(p);
  for (const Complex& z : upper) {
    result.poles.push_back(z);
    result.poles.push_back(std::conj(z));
  }
  for (const Complex& z : real) result.poles.push_back(z);
  for (const Complex& z : result.poles) {
    Complex value, derivative;
    Evaluate(a, z, &value, &derivative);
    if (!(std::abs(value) <= tolerance)) {
      throw RootFindingError("root residual above tolerance", frame_index);
    }
  }
  return result;
}

LpcModel PolesToLpc(const PoleSet& poles) {
  const auto& in = poles.poles;
  std::vector<bool> used(in.size(), false);
  std::vector<double> poly{1.0};

  auto multiply = [&poly](std::span<const double> factor) {
    std::vector<double> out(poly.size() + factor.size() - 1, 0.0);
    for (size_t i = 0; i < poly.size(); ++i) {
      for (size_t j = 0; j < factor.size(); ++j) out[i + j] += poly[i] * factor[j];
    }
    poly = std::move(out);
  };

  for (size_t i = 0; i < in.size(); ++i) {
    if (used[i]) continue;
    const Complex z = in[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error("PolesToLpc: non-finite pole");
    }
    const double scale = std::max(1.0, std::abs(z));
    used[i] = true;
    if (std::fabs(z.imag()) <= kConjugateTolerance * scale) {
      const double factor[] = {1.0, -z.real()};
      multiply(factor);
      continue;
    }
    size_t best = in.size();
    double best_distance = 0.0;
    for (size_t j = i + 1; j < in.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(in[j] - std::conj(z));
      if (best == in.size() || d < best_distance) {
        best = j;
        best_distance = d;
      }
    }
    if (best == in.size() || best_distance > kConjugateTolerance * scale) {
      throw Error("PolesToLpc: pole set is not closed under conjugation");
    }
    used[best] = true;
    const Complex partner = in[best];
    const double re = 0.5 * (z.real() + partner.real());
    const double mag2 = 0.5 * (std::norm(z) + std::norm(partner));
    const double factor[] = {1.0, -2.0 * re, mag2};
    multiply(factor);
  }
  LpcModel model;
  model.coefficients.assign(poly.begin() + 1, poly.end());
  return model;
}

PoleSet ShiftPoles(const PoleSet& poles, double alpha, double imag_eps) {
  PoleSet out;
  out.poles.reserve(poles.poles.size());
  for (const Complex& z : poles.poles) {
    Complex shifted = z;
    if (std::fabs(z.imag()) > imag_eps) {
      const double magnitude = std::abs(z);
      const double phase = std::fabs(std::arg(z));
      const double warped = std::clamp(std::pow(phase, alpha), kMinPhase, kMaxPhase);
      if (warped != phase) {
        shifted = std::polar(magnitude, z.imag() > 0.0 ? warped : -warped);
      }
    }
    const double radius = std::abs(shifted);
    if (radius >= 1.0) shifted *= kStabilityRadius / radius;
    out.poles.push_back(shifted);
  }
  return out;
}

bool AllPolesInsideUnitCircle(const PoleSet& poles) {
  return std::all_of(poles.poles.begin(), poles.poles.end(),
                     [](const Complex& z) { return std::abs(z) < 1.0; });
}

std::vector<double> AnalysisFilter(std::span<const double> coefficients,
                                   std::span<const double> signal) {
  std::vector<double> out(signal.size());
  const size_t p = coefficients.size();
  for (size_t n = 0; n < signal.size(); ++n) {
    double acc = signal[n];
    for (size_t k = 1; k <= p && k <= n; ++k) acc += coefficients[k - 1] * signal[n - k];
    out[n] = acc;
  }
  return out;
}

std::vector<double> SynthesisFilter(std::span<const double> coefficients,
                                    std::span<const double> excitation) {
  std::vector<double> out(excitation.size());
  const size_t p = coefficients.size();
  for (size_t n = 0; n < excitation.size(); ++n) {
    double acc = excitation[n];
    for (size_t k = 1; k <= p && k <= n; ++k) acc -= coefficients[k - 1] * out[n - k];
    out[n] = acc;
  }
  return out;
}

}  // namespace csanon

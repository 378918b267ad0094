// src/degrade/filter_design.cc

// Copyright 2026  The HiFi++ Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "hifipp/degrade/filter_design.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "hifipp/errors.h"

namespace hifipp {

using cd = std::complex<double>;

std::string FamilyName(FilterFamily f) {
  switch (f) {
    case FilterFamily::kButterworth:
      return "butterworth";
    case FilterFamily::kChebyshev1:
      return "chebyshev1";
    case FilterFamily::kBessel:
      return "bessel";
    case FilterFamily::kElliptic:
      return "elliptic";
  }
  return "unknown";
}

FilterFamily ParseFamily(const std::string& name) {
  for (auto f : kAllFilterFamilies)
    if (FamilyName(f) == name) return f;
  throw ParameterError("unknown filter family '" + name + "'");
}

namespace {

constexpr double kEps = 1e-14;

double Pow10m1(double x) { return std::expm1(std::log(10.0) * x); }

// Complete elliptic integral of the first kind in terms of the parameter m = k^2.
double EllipK(double m) { return boost::math::ellint_1(std::sqrt(m)); }
// K(1 - p), accurate for small p.
double EllipKm1(double p) { return boost::math::ellint_1(std::sqrt(1.0 - p)); }

struct Jacobi {
  double sn, cn, dn;
};
Jacobi EllipJ(double u, double m) {
  Jacobi j{};
  j.sn = boost::math::jacobi_elliptic(std::sqrt(m), u, &j.cn, &j.dn);
  return j;
}

// Elliptic modulus (as parameter) of an order-n filter with given m1 via the
// nome series.
double EllipDeg(int n, double m1) {
  constexpr int kTerms = 7;
  const double k1 = EllipK(m1);
  const double k1p = EllipKm1(m1);
  const double q1 = std::exp(-std::numbers::pi * k1p / k1);
  const double q = std::pow(q1, 1.0 / n);
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= kTerms; ++i) num += std::pow(q, i * (i + 1));
  for (int i = 1; i <= kTerms + 1; ++i) den += std::pow(q, i * i);
  den = 1.0 + 2.0 * den;
  return 16.0 * q * std::pow(num / den, 4);
}

// Inverse Jacobi sn for complex argument by descending Landen transformation.
cd ArcJacSn(cd w, double m) {
  auto complement = [](cd kx) { return std::sqrt((1.0 - kx) * (1.0 + kx)); };
  const double k = std::sqrt(m);
  if (k == 1.0) return std::atanh(w);
  std::vector<double> ks{k};
  for (int iter = 0; ks.back() != 0.0; ++iter) {
    if (iter > 10) throw ConfigError("elliptic design: Landen iteration did not converge");
    const double kp = std::sqrt((1.0 - ks.back()) * (1.0 + ks.back()));
    ks.push_back((1.0 - kp) / (1.0 + kp));
  }
  double big_k = std::numbers::pi / 2;
  for (std::size_t i = 1; i < ks.size(); ++i) big_k *= 1.0 + ks[i];
  cd wn = w;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    wn = 2.0 * wn / ((1.0 + ks[i + 1]) * (1.0 + complement(ks[i] * wn)));
  return big_k * (2.0 / std::numbers::pi) * std::asin(wn);
}

// Real inverse of the Jacobi sc function, via sc(u, m) = -i sn(iu, 1 - m).
double ArcJacSc1(double w, double m) {
  const cd z = ArcJacSn(cd(0.0, w), m);
  if (std::abs(z.real()) > 1e-12) throw ConfigError("elliptic design: arc_jac_sc1 not real");
  return z.imag();
}

std::vector<double> BesselPolynomial(int n) {
  // Coefficients a_k of theta_n(s) = sum_k a_k s^k.
  std::vector<double> a(n + 1);
  for (int k = 0; k <= n; ++k) {
    a[k] = std::exp(std::lgamma(2.0 * n - k + 1) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0) - (n - k) * std::log(2.0));
  }
  return a;
}

cd EvalPoly(const std::vector<double>& a, cd s) {
  cd acc = 0.0;
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k) acc = acc * s + a[k];
  return acc;
}

std::vector<cd> PolyRoots(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[i] / a[n];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cd> roots;
  std::vector<double> da(n);
  for (int k = 1; k <= n; ++k) da[k - 1] = k * a[k];
  for (int i = 0; i < n; ++i) {
    cd r = solver.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const cd step = EvalPoly(a, r) / EvalPoly(da, r);
      r -= step;
      if (std::abs(step) < 1e-15 * std::abs(r)) break;
    }
    roots.push_back(r);
  }
  return roots;
}

Biquad SectionFromRoots(const std::vector<cd>& zeros, const std::vector<cd>& poles) {
  Biquad s;
  auto coeffs = [](const std::vector<cd>& r) {
    // (1 - r0 z^-1)(1 - r1 z^-1) for up to two roots.
    std::array<double, 3> c{1.0, 0.0, 0.0};
    if (r.size() == 1) {
      c[1] = -r[0].real();
    } else if (r.size() == 2) {
      c[1] = -(r[0] + r[1]).real();
      c[2] = (r[0] * r[1]).real();
    }
    return c;
  };
  const auto b = coeffs(zeros);
  const auto a = coeffs(poles);
  s.b0 = b[0];
  s.b1 = b[1];
  s.b2 = b[2];
  s.a1 = a[1];
  s.a2 = a[2];
  return s;
}

// Groups roots into conjugate pairs and leftover reals.
std::vector<std::vector<cd>> PairRoots(std::vector<cd> roots) {
  std::vector<std::vector<cd>> pairs;
  std::vector<cd> reals;
  std::sort(roots.begin(), roots.end(), [](cd x, cd y) {
    return std::abs(x.imag()) > std::abs(y.imag()) ||
           (std::abs(x.imag()) == std::abs(y.imag()) && x.real() < y.real());
  });
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    if (std::abs(roots[i].imag()) <= 1e-10 * std::max(1.0, std::abs(roots[i]))) {
      reals.push_back(roots[i].real());
      used[i] = true;
      continue;
    }
    std::size_t best = roots.size();
    double best_d = 1e300;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - std::conj(roots[i]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == roots.size()) throw ConfigError("filter design: unpaired complex root");
    used[i] = used[best] = true;
    pairs.push_back({roots[i], std::conj(roots[i])});
  }
  std::sort(reals.begin(), reals.end(), [](cd x, cd y) { return x.real() < y.real(); });
  for (std::size_t i = 0; i < reals.size(); i += 2) {
    if (i + 1 < reals.size())
      pairs.push_back({reals[i], reals[i + 1]});
    else
      pairs.push_back({reals[i]});
  }
  return pairs;
}

std::vector<Biquad> ZpkToSos(const Zpk& digital) {
  auto pole_groups = PairRoots(digital.poles);
  // Poles closest to the unit circle first; each grabs its nearest zeros.
  std::sort(pole_groups.begin(), pole_groups.end(), [](const auto& x, const auto& y) {
    return std::abs(x[0]) > std::abs(y[0]);
  });
  auto zero_groups = PairRoots(digital.zeros);
  std::vector<bool> taken(zero_groups.size(), false);
  std::vector<Biquad> sos;
  for (const auto& pg : pole_groups) {
    std::size_t best = zero_groups.size();
    double best_d = 1e300;
    for (std::size_t j = 0; j < zero_groups.size(); ++j) {
      if (taken[j] || zero_groups[j].size() > pg.size() + 1) continue;
      const double d = std::abs(zero_groups[j][0] - pg[0]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    std::vector<cd> zs;
    if (best < zero_groups.size()) {
      taken[best] = true;
      zs = zero_groups[best];
    }
    sos.push_back(SectionFromRoots(zs, pg));
  }
  for (std::size_t j = 0; j < zero_groups.size(); ++j)
    if (!taken[j]) sos.push_back(SectionFromRoots(zero_groups[j], {}));
  if (sos.empty()) sos.push_back(Biquad{});
  sos.front().b0 *= digital.gain;
  sos.front().b1 *= digital.gain;
  sos.front().b2 *= digital.gain;
  return sos;
}

}  // namespace

Zpk ButterworthPrototype(int order) {
  Zpk zpk;
  for (int m = -order + 1; m < order; m += 2)
    zpk.poles.push_back(-std::exp(cd(0.0, std::numbers::pi * m / (2.0 * order))));
  zpk.gain = 1.0;
  return zpk;
}

Zpk Chebyshev1Prototype(int order, double ripple_db) {
  Zpk zpk;
  const double eps = std::sqrt(Pow10m1(0.1 * ripple_db));
  const double mu = std::asinh(1.0 / eps) / order;
  cd prod = 1.0;
  for (int m = -order + 1; m < order; m += 2) {
    const double theta = std::numbers::pi * m / (2.0 * order);
    const cd p = -std::sinh(cd(mu, theta));
    zpk.poles.push_back(p);
    prod *= -p;
  }
  zpk.gain = prod.real();
  if (order % 2 == 0) zpk.gain /= std::sqrt(1.0 + eps * eps);
  return zpk;
}

Zpk BesselPrototype(int order) {
  const auto a = BesselPolynomial(order);
  auto poles = PolyRoots(a);
  // Rescale so |H(j)| = 1/sqrt(2).
  auto mag2 = [&](double w) {
    const cd h = a[0] / EvalPoly(a, cd(0.0, w));
    return std::norm(h);
  };
  double lo = 1e-3, hi = 1e3;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (mag2(mid) > 0.5 ? lo : hi) = mid;
  }
  const double wc = std::sqrt(lo * hi);
  Zpk zpk;
  cd prod = 1.0;
  for (auto p : poles) {
    zpk.poles.push_back(p / wc);
    prod *= -p / wc;
  }
  zpk.gain = prod.real();
  return zpk;
}

Zpk EllipticPrototype(int order, double ripple_db, double stopband_db) {
  Zpk zpk;
  if (order == 1) {
    const double p = -std::sqrt(1.0 / Pow10m1(0.1 * ripple_db));
    zpk.poles.push_back(p);
    zpk.gain = -p;
    return zpk;
  }
  const double eps_sq = Pow10m1(0.1 * ripple_db);
  const double eps = std::sqrt(eps_sq);
  const double ck1_sq = eps_sq / Pow10m1(0.1 * stopband_db);
  const double k1 = EllipK(ck1_sq);
  const double m = EllipDeg(order, ck1_sq);
  const double capk = EllipK(m);

  std::vector<Jacobi> js;
  for (int j = 1 - order % 2; j < order; j += 2) js.push_back(EllipJ(j * capk / order, m));

  for (const auto& jv : js) {
    if (std::abs(jv.sn) > kEps) {
      const cd z(0.0, 1.0 / (std::sqrt(m) * jv.sn));
      zpk.zeros.push_back(z);
      zpk.zeros.push_back(std::conj(z));
    }
  }
  const double r = ArcJacSc1(1.0 / eps, ck1_sq);
  const double v0 = capk * r / (order * k1);
  const Jacobi jv0 = EllipJ(v0, 1.0 - m);
  std::vector<cd> base;
  for (const auto& jv : js) {
    const double den = 1.0 - std::pow(jv.dn * jv0.sn, 2);
    base.push_back(-cd(jv.cn * jv.dn * jv0.sn * jv0.cn, jv.sn * jv0.dn) / den);
  }
  double norm = 0.0;
  for (auto p : base) norm += std::norm(p);
  norm = std::sqrt(norm);
  for (auto p : base) {
    zpk.poles.push_back(p);
    if (order % 2 == 0 || std::abs(p.imag()) > kEps * norm) zpk.poles.push_back(std::conj(p));
  }
  cd pp = 1.0, zz = 1.0;
  for (auto p : zpk.poles) pp *= -p;
  for (auto z : zpk.zeros) zz *= -z;
  zpk.gain = (pp / zz).real();
  if (order % 2 == 0) zpk.gain /= std::sqrt(1.0 + eps_sq);
  return zpk;
}

FilterDesign design_lowpass(FilterFamily family, int order, double cutoff_hz, int rate,
                            const RippleSpec& ripple) {
  if (rate <= 0) throw ParameterError("filter sample rate must be positive");
  if (!(cutoff_hz > 0.0 && cutoff_hz < rate / 2.0))
    throw ParameterError("low-pass cutoff " + std::to_string(cutoff_hz) +
                         " Hz must lie strictly inside (0, " + std::to_string(rate / 2.0) + ") Hz");
  if (order < 1 || order > 10)
    throw ParameterError("filter order " + std::to_string(order) + " outside [1, 10]");

  Zpk analog;
  switch (family) {
    case FilterFamily::kButterworth:
      analog = ButterworthPrototype(order);
      break;
    case FilterFamily::kChebyshev1:
      analog = Chebyshev1Prototype(order, ripple.passband_db);
      break;
    case FilterFamily::kBessel:
      analog = BesselPrototype(order);
      break;
    case FilterFamily::kElliptic:
      analog = EllipticPrototype(order, ripple.passband_db, ripple.stopband_db);
      break;
  }

  // Pre-warp to the bilinear frequency axis with fs = 2 (normalised rate).
  constexpr double fs2 = 4.0;
  const double wn = cutoff_hz / (rate / 2.0);
  const double warped = fs2 * std::tan(std::numbers::pi * wn / 2.0);
  const int degree = static_cast<int>(analog.poles.size() - analog.zeros.size());

  Zpk digital;
  cd num = 1.0, den = 1.0;
  for (auto z : analog.zeros) {
    const cd zs = z * warped;
    digital.zeros.push_back((fs2 + zs) / (fs2 - zs));
    num *= fs2 - zs;
  }
  for (auto p : analog.poles) {
    const cd ps = p * warped;
    digital.poles.push_back((fs2 + ps) / (fs2 - ps));
    den *= fs2 - ps;
  }
  for (int i = 0; i < degree; ++i) digital.zeros.push_back(-1.0);
  digital.gain = analog.gain * std::pow(warped, degree) * (num / den).real();

  FilterDesign design;
  design.family = family;
  design.order = order;
  design.cutoff_hz = cutoff_hz;
  design.sample_rate = rate;
  design.sections = ZpkToSos(digital);
  if (!design.IsStable())
    throw ConfigError("designed " + FamilyName(family) + " filter of order " +
                      std::to_string(order) + " is unstable");
  return design;
}

std::complex<double> FilterDesign::Response(double hz) const {
  const double w = 2.0 * std::numbers::pi * hz / sample_rate;
  const cd z1 = std::exp(cd(0.0, -w));
  const cd z2 = z1 * z1;
  cd h = 1.0;
  for (const auto& s : sections)
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

double FilterDesign::MagnitudeDb(double hz) const {
  return 20.0 * std::log10(std::max(std::abs(Response(hz)), 1e-300));
}

bool FilterDesign::IsStable() const {
  for (const auto& s : sections) {
    // Roots of z^2 + a1 z + a2.
    const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    const cd r1 = (-s.a1 + disc) / 2.0;
    const cd r2 = (-s.a1 - disc) / 2.0;
    if (std::abs(r1) >= 1.0 || std::abs(r2) >= 1.0) return false;
  }
  return true;
}

Waveform apply_filter(const Waveform& w, const FilterDesign& f) {
  if (w.sample_rate != f.sample_rate)
    throw ParameterError("filter designed for " + std::to_string(f.sample_rate) +
                         " Hz applied to " + std::to_string(w.sample_rate) + " Hz audio");
  std::vector<double> buf(w.samples.begin(), w.samples.end());
  for (const auto& s : f.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (auto& x : buf) {
      const double y = s.b0 * x + z1;
      z1 = s.b1 * x - s.a1 * y + z2;
      z2 = s.b2 * x - s.a2 * y;
      x = y;
    }
  }
  return Waveform(std::vector<float>(buf.begin(), buf.end()), w.sample_rate);
}

}  // namespace hifipp

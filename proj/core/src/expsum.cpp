#include "nsc/expsum.hpp"

#include <algorithm>
#include <cmath>

namespace nsc {

cplx ExpSum::operator()(double x) const {
  cplx s = 0.0;
  for (const auto& t : terms_) s += t.coef * std::exp(t.rate * (x - t.anchor));
  return s;
}

ExpSum ExpSum::derivative() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_)
    out.push_back({t.coef * t.rate, t.rate, t.anchor});
  return ExpSum(std::move(out));
}

ExpSum ExpSum::conjugated() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_)
    out.push_back({std::conj(t.coef), std::conj(t.rate), t.anchor});
  return ExpSum(std::move(out));
}

ExpSum ExpSum::reflected() const {
  // f(1-x): c e^{a((1-x) - s)} = c e^{(-a)(x - (1-s))}
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_)
    out.push_back({t.coef, -t.rate, 1.0 - t.anchor});
  return ExpSum(std::move(out));
}

ExpSum ExpSum::scaled(cplx s) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.coef * s, t.rate, t.anchor});
  return ExpSum(std::move(out));
}

ExpSum ExpSum::operator+(const ExpSum& other) const {
  std::vector<Term> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ExpSum(std::move(out));
}

ExpSum ExpSum::operator-(const ExpSum& other) const {
  std::vector<Term> out = terms_;
  out.reserve(out.size() + other.terms_.size());
  for (const auto& t : other.terms_)
    out.push_back({-t.coef, t.rate, t.anchor});
  return ExpSum(std::move(out));
}

cplx integral01_exp(cplx a) {
  if (std::abs(a) < 1e-8) {
    // series keeps full accuracy through the removable singularity
    return 1.0 + a / 2.0 + a * a / 6.0 + a * a * a / 24.0;
  }
  return (std::exp(a) - 1.0) / a;
}

cplx integral01_exp_shifted(cplx rate, cplx offset) {
  // (e^{offset+rate} - e^{offset}) / rate with the larger endpoint factored
  // out, so magnitudes stay representable whenever the endpoints are
  if (std::abs(rate) < 1e-8) return std::exp(offset) * integral01_exp(rate);
  const double m = std::max(offset.real(), (offset + rate).real());
  const cplx lead = std::exp(cplx(m, 0.0));
  return lead * (std::exp(offset + rate - m) - std::exp(offset - m)) / rate;
}

cplx ExpSum::integral01() const {
  cplx s = 0.0;
  for (const auto& t : terms_)
    s += t.coef * integral01_exp_shifted(t.rate, -t.rate * t.anchor);
  return s;
}

cplx ExpSum::mode_coefficient(int m) const {
  const cplx shift(0.0, 2.0 * M_PI * static_cast<double>(m));
  cplx s = 0.0;
  for (const auto& t : terms_)
    s += t.coef *
         integral01_exp_shifted(t.rate + shift, -t.rate * t.anchor);
  return s;
}

ExpSum ExpSum::damped_sine(cplx amplitude, double wavenumber_pi, cplx rate) {
  // amplitude * e^{rate x} * sin(wavenumber_pi * (1-x))
  const cplx iw(0.0, wavenumber_pi);
  const cplx half = amplitude / cplx(0.0, 2.0);
  std::vector<Term> out;
  out.push_back({half * std::exp(iw), rate - iw, 0.0});
  out.push_back({-half * std::exp(-iw), rate + iw, 0.0});
  return ExpSum(std::move(out));
}

cplx inner01(const ExpSum& f, const ExpSum& g) {
  cplx s = 0.0;
  for (const auto& tf : f.terms()) {
    if (tf.coef == cplx(0.0)) continue;
    for (const auto& tg : g.terms()) {
      if (tg.coef == cplx(0.0)) continue;
      const cplx rate = tf.rate + std::conj(tg.rate);
      const cplx offset =
          -tf.rate * tf.anchor - std::conj(tg.rate) * tg.anchor;
      s += tf.coef * std::conj(tg.coef) *
           integral01_exp_shifted(rate, offset);
    }
  }
  return s;
}

double norm01(const ExpSum& f) {
  double v = std::real(inner01(f, f));
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace nsc

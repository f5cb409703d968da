#pragma once
// Smooth cutoff machinery: a(t) = exp(-1/t) extended by 0, the partition
// step b(t) = a(t)/(a(t)+a(1-t)), and the plateau cutoff
// c_eps(t) = b(2 - t/eps), equal to 1 on [0, eps] and 0 from 2 eps on.
// First and second derivatives are closed-form; every branch is exactly
// flat outside its transition window, so derivative queries there cost
// nothing and are exact.

#include <cmath>

#include "braidflow/errors.hpp"

namespace braidflow {

struct MollifierValue {
  double value = 0;
  double d1 = 0;
  double d2 = 0;
};

inline MollifierValue mollifier_a(double t) {
  if (t <= 0) return {0, 0, 0};
  const double v = std::exp(-1.0 / t);
  if (v == 0) return {0, 0, 0};  // deep underflow; derivatives vanish too
  const double t2 = t * t;
  const double d1 = v / t2;
  const double d2 = v * (1 - 2 * t) / (t2 * t2);
  return {v, d1, d2};
}

inline MollifierValue mollifier_b(double t) {
  if (t <= 0) return {0, 0, 0};
  if (t >= 1) return {1, 0, 0};
  const MollifierValue f = mollifier_a(t);
  const MollifierValue r = mollifier_a(1 - t);  // reflected piece
  const double num = f.value;
  const double den = f.value + r.value;
  const double num1 = f.d1;
  const double den1 = f.d1 - r.d1;
  const double num2 = f.d2;
  const double den2 = f.d2 + r.d2;
  const double v = num / den;
  const double w1 = (num1 * den - num * den1) / (den * den);
  const double w2 = (num2 * den - num * den2) / (den * den) -
                    2 * den1 * (num1 * den - num * den1) / (den * den * den);
  return {v, w1, w2};
}

inline MollifierValue mollifier_c(double eps, double t) {
  if (eps <= 0) throw InputError("mollifier_c requires eps > 0");
  const double u = 2 - t / eps;
  const MollifierValue b = mollifier_b(u);
  return {b.value, -b.d1 / eps, b.d2 / (eps * eps)};
}

enum class MollifierKind { a, b, c_eps };

inline MollifierValue mollifier_eval(MollifierKind kind, double eps, double t) {
  switch (kind) {
    case MollifierKind::a:
      return mollifier_a(t);
    case MollifierKind::b:
      return mollifier_b(t);
    case MollifierKind::c_eps:
      return mollifier_c(eps, t);
  }
  throw InputError("unknown mollifier kind");
}

}  // namespace braidflow

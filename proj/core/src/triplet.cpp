#include "msvi/triplet.hpp"

#include <cmath>
#include <utility>

namespace msvi {

Triplet::Triplet(RandomVector x_, RandomVector y_, RandomVector lam_)
    : x(std::move(x_)), y(std::move(y_)), lam(std::move(lam_)) {
  if (!same_space(x.space(), y.space()) || !same_space(x.space(), lam.space())) {
    throw ShapeError("Triplet: components live on different sample spaces");
  }
  if (x.dim() != y.dim() || x.dim() != lam.dim()) {
    throw ShapeError("Triplet: component dimensions differ");
  }
  if (x.blocks() != y.blocks() || x.blocks() != lam.blocks()) {
    throw ShapeError("Triplet: component block splits differ");
  }
}

Triplet operator+(const Triplet& a, const Triplet& b) {
  return Triplet(a.x + b.x, a.y + b.y, a.lam + b.lam);
}

Triplet operator-(const Triplet& a, const Triplet& b) {
  return Triplet(a.x - b.x, a.y - b.y, a.lam - b.lam);
}

Triplet operator*(double s, const Triplet& a) {
  return Triplet(s * a.x, s * a.y, s * a.lam);
}

GMetric::GMetric(double beta_, double r_) : beta(beta_), r(r_) {
  if (!(beta > 0)) throw ValidationError("GMetric: beta must be positive");
  if (!(r > 0)) throw ValidationError("GMetric: r must be positive");
}

double g_norm(const Triplet& theta, const GMetric& g) {
  const double nx = l2_norm(theta.x);
  const double ny = l2_norm(theta.y);
  const double nl = l2_norm(theta.lam);
  return std::sqrt(g.beta * g.r * nx * nx + g.beta * ny * ny + nl * nl / g.beta);
}

double g_inner(const Triplet& theta, const Triplet& vartheta, const GMetric& g) {
  return g.beta * g.r * l2_inner(theta.x, vartheta.x) +
         g.beta * l2_inner(theta.y, vartheta.y) +
         l2_inner(theta.lam, vartheta.lam) / g.beta;
}

}  // namespace msvi

#include "zermelo/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zermelo {

namespace {

struct Vortex {
  double sign;
  double a;
  double b;
};

// W = s * (-R_{2,2} - R_{4,4} - R_{2,5} + R_{5,1})
constexpr Vortex kVortices[] = {
    {-1.0, 2.0, 2.0}, {-1.0, 4.0, 4.0}, {-1.0, 2.0, 5.0}, {+1.0, 5.0, 1.0}};

}  // namespace

FieldSample FourVorticesField::sample(const Point& p) const {
  double w1 = 0.0, w2 = 0.0;
  for (const Vortex& vx : kVortices) {
    const double dx = p.x1 - vx.a;
    const double dy = p.x2 - vx.b;
    const double den = 3.0 * (dx * dx + dy * dy) + 1.0;
    w1 += vx.sign * (-dy / den);
    w2 += vx.sign * (dx / den);
  }
  return {s_ * w1, s_ * w2};
}

FieldJacobian FourVorticesField::jacobian(const Point& p) const {
  FieldJacobian J;
  for (const Vortex& vx : kVortices) {
    const double dx = p.x1 - vx.a;
    const double dy = p.x2 - vx.b;
    const double den = 3.0 * (dx * dx + dy * dy) + 1.0;
    const double den2 = den * den;
    // d/dx (-dy/den) etc., den' = 6*(dx, dy)
    J.w11 += vx.sign * (6.0 * dx * dy / den2);
    J.w12 += vx.sign * ((-den + 6.0 * dy * dy) / den2);
    J.w21 += vx.sign * ((den - 6.0 * dx * dx) / den2);
    J.w22 += vx.sign * (-6.0 * dx * dy / den2);
  }
  J.w11 *= s_;
  J.w12 *= s_;
  J.w21 *= s_;
  J.w22 *= s_;
  return J;
}

GridField::GridField(std::vector<double> x1_axis, std::vector<double> x2_axis,
                     std::vector<double> u, std::vector<double> v,
                     std::vector<std::uint8_t> land, Space space)
    : x1_(std::move(x1_axis)),
      x2_(std::move(x2_axis)),
      u_(std::move(u)),
      v_(std::move(v)),
      land_(std::move(land)),
      space_(space) {
  if (x1_.size() < 2 || x2_.size() < 2)
    throw ShapeMismatchError("grid field: each axis needs at least 2 nodes");
  for (const auto* axis : {&x1_, &x2_})
    for (std::size_t i = 1; i < axis->size(); ++i)
      if (!((*axis)[i] > (*axis)[i - 1]))
        throw NonMonotonicAxisError("grid field: axis not strictly increasing");
  const std::size_t cells = x1_.size() * x2_.size();
  if (u_.size() != cells || v_.size() != cells || land_.size() != cells)
    throw ShapeMismatchError("grid field: array shapes inconsistent with axes");
  for (std::size_t i = 0; i < cells; ++i)
    if (!land_[i] && (!std::isfinite(u_[i]) || !std::isfinite(v_[i])))
      throw ShapeMismatchError("grid field: non-finite current on water node");
}

void GridField::locate(const std::vector<double>& axis, double x, std::size_t& cell,
                       double& frac) {
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
  i = std::min(i, axis.size() - 2);
  cell = i;
  frac = (x - axis[i]) / (axis[i + 1] - axis[i]);
}

bool GridField::in_domain(const Point& p) const {
  return p.x1 >= x1_.front() && p.x1 <= x1_.back() && p.x2 >= x2_.front() && p.x2 <= x2_.back();
}

FieldSample GridField::sample(const Point& p) const {
  if (!in_domain(p))
    throw OutOfDomainError("grid sample outside domain at (" + std::to_string(p.x1) + ", " +
                           std::to_string(p.x2) + ")");
  std::size_t i, j;
  double fx, fy;
  locate(x1_, p.x1, i, fx);
  locate(x2_, p.x2, j, fy);

  const std::size_t corners[4] = {idx(j, i), idx(j, i + 1), idx(j + 1, i), idx(j + 1, i + 1)};
  const double weights[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};

  // Land corners are excluded and the remaining bilinear weights
  // renormalized over water; zero-filling would fake current gradients
  // along coastlines.
  double wsum = 0.0, su = 0.0, sv = 0.0;
  for (int c = 0; c < 4; ++c) {
    if (land_[corners[c]]) continue;
    wsum += weights[c];
    su += weights[c] * u_[corners[c]];
    sv += weights[c] * v_[corners[c]];
  }
  if (wsum <= 0.0)
    throw AllLandCellError("grid sample: no water corner with weight at (" +
                           std::to_string(p.x1) + ", " + std::to_string(p.x2) + ")");
  return {su / wsum, sv / wsum};
}

FieldJacobian GridField::jacobian(const Point& p) const {
  if (!in_domain(p))
    throw OutOfDomainError("grid jacobian outside domain");
  std::size_t i, j;
  double fx, fy;
  locate(x1_, p.x1, i, fx);
  locate(x2_, p.x2, j, fy);
  // Step of one local cell: derivatives below the data resolution are noise.
  const double h1 = x1_[i + 1] - x1_[i];
  const double h2 = x2_[j + 1] - x2_[j];

  FieldJacobian J;
  auto diff = [&](double hx, double hy, bool& one_sided) -> FieldSample {
    const Point plus{p.x1 + hx, p.x2 + hy};
    const Point minus{p.x1 - hx, p.x2 - hy};
    const double h = std::max(std::abs(hx), std::abs(hy));
    if (in_domain(plus) && in_domain(minus)) {
      const FieldSample a = sample(plus), b = sample(minus);
      return {(a.w1 - b.w1) / (2.0 * h), (a.w2 - b.w2) / (2.0 * h)};
    }
    one_sided = true;
    if (in_domain(plus)) {
      const FieldSample a = sample(plus), b = sample(p);
      return {(a.w1 - b.w1) / h, (a.w2 - b.w2) / h};
    }
    if (in_domain(minus)) {
      const FieldSample a = sample(p), b = sample(minus);
      return {(a.w1 - b.w1) / h, (a.w2 - b.w2) / h};
    }
    throw OutOfDomainError("grid jacobian: stencil leaves domain on both sides");
  };

  const FieldSample d1 = diff(h1, 0.0, J.one_sided);
  const FieldSample d2 = diff(0.0, h2, J.one_sided);
  J.w11 = d1.w1;
  J.w21 = d1.w2;
  J.w12 = d2.w1;
  J.w22 = d2.w2;
  return J;
}

bool GridField::is_land(const Point& p) const {
  if (!in_domain(p)) return true;
  std::size_t i, j;
  double fx, fy;
  locate(x1_, p.x1, i, fx);
  locate(x2_, p.x2, j, fy);
  const std::size_t ni = fx < 0.5 ? i : i + 1;
  const std::size_t nj = fy < 0.5 ? j : j + 1;
  return land_[idx(nj, ni)] != 0;
}

std::unique_ptr<Field> make_builtin_field(const std::string& name) {
  if (name == "zero") return std::make_unique<ZeroField>();
  if (name == "circular") return std::make_unique<CircularField>();
  if (name == "four_vortices") return std::make_unique<FourVorticesField>();
  throw ConfigError("unknown builtin field: " + name);
}

}  // namespace zermelo

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zermelo/geometry.hpp"

namespace zermelo {

/// Current vector <w1, w2> at a point, in an east-north frame.
struct FieldSample {
  double w1 = 0.0;
  double w2 = 0.0;
};

/// Partial derivatives wij = dwi/dxj in the coordinate units of the space.
/// one_sided is set when a grid stencil had to fall back to a one-sided
/// difference at the domain boundary.
struct FieldJacobian {
  double w11 = 0.0;
  double w12 = 0.0;
  double w21 = 0.0;
  double w22 = 0.0;
  bool one_sided = false;
};

/// A stationary current field. Implementations are immutable after
/// construction; sampling is pure and safe under unrestricted concurrency.
class Field {
 public:
  virtual ~Field() = default;

  virtual FieldSample sample(const Point& p) const = 0;
  virtual FieldJacobian jacobian(const Point& p) const = 0;
  virtual bool is_land(const Point& p) const { return false; }
  virtual bool in_domain(const Point& p) const { return true; }
};

/// No current anywhere.
class ZeroField final : public Field {
 public:
  FieldSample sample(const Point&) const override { return {}; }
  FieldJacobian jacobian(const Point&) const override { return {}; }
};

/// Spatially constant current.
class UniformField final : public Field {
 public:
  UniformField(double w1, double w2) : w_{w1, w2} {}
  FieldSample sample(const Point&) const override { return w_; }
  FieldJacobian jacobian(const Point&) const override { return {}; }

 private:
  FieldSample w_;
};

/// Clockwise rotation around a centre, intensity growing linearly with the
/// distance from it: W = <s*(x2-b), -s*(x1-a)>.
class CircularField final : public Field {
 public:
  CircularField(double a = -3.0, double b = -1.0, double s = 0.05) : a_(a), b_(b), s_(s) {}

  FieldSample sample(const Point& p) const override {
    return {s_ * (p.x2 - b_), -s_ * (p.x1 - a_)};
  }
  FieldJacobian jacobian(const Point&) const override { return {0.0, s_, -s_, 0.0, false}; }

  Point center() const { return {a_, b_}; }
  double scale() const { return s_; }

 private:
  double a_, b_, s_;
};

/// Superposition of four decaying vortices,
/// W = s * (-R_{2,2} - R_{4,4} - R_{2,5} + R_{5,1}) with
/// R_{a,b} = [-(x2-b), x1-a] / (3((x1-a)^2+(x2-b)^2) + 1).
/// With s = 1.7 the maximum of |W| stays just below 1.
class FourVorticesField final : public Field {
 public:
  explicit FourVorticesField(double s = 1.7) : s_(s) {}

  FieldSample sample(const Point& p) const override;
  FieldJacobian jacobian(const Point& p) const override;

 private:
  double s_;
};

/// Currents sampled on a rectilinear grid with a land mask, bilinearly
/// interpolated. Arrays are indexed [x2][x1], flattened row-major.
class GridField final : public Field {
 public:
  GridField(std::vector<double> x1_axis, std::vector<double> x2_axis, std::vector<double> u,
            std::vector<double> v, std::vector<std::uint8_t> land, Space space);

  FieldSample sample(const Point& p) const override;
  FieldJacobian jacobian(const Point& p) const override;
  bool is_land(const Point& p) const override;
  bool in_domain(const Point& p) const override;

  const std::vector<double>& x1_axis() const { return x1_; }
  const std::vector<double>& x2_axis() const { return x2_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }
  const std::vector<std::uint8_t>& land_mask() const { return land_; }
  const Space& space() const { return space_; }

 private:
  std::size_t idx(std::size_t j, std::size_t i) const { return j * x1_.size() + i; }
  // Cell index and fractional offset along one axis; clamps the right edge
  // into the last cell.
  static void locate(const std::vector<double>& axis, double x, std::size_t& cell, double& frac);

  std::vector<double> x1_, x2_;
  std::vector<double> u_, v_;
  std::vector<std::uint8_t> land_;
  Space space_;
};

/// Builtin analytic fields by name: "zero", "circular", "four_vortices".
std::unique_ptr<Field> make_builtin_field(const std::string& name);

}  // namespace zermelo

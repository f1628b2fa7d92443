#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mife {

using Index = std::int64_t;

template <int Dim>
using Point = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Tensor = Eigen::Matrix<double, Dim, Dim>;

/// Side of the (discrete) interface. Minus is the inclusion, plus the exterior.
enum class Side : int { minus = 0, plus = 1 };

inline constexpr int side_index(Side s) { return static_cast<int>(s); }
inline constexpr Side side_of_value(double v) { return v > 0.0 ? Side::plus : Side::minus; }
inline constexpr std::array<Side, 2> kSides{Side::minus, Side::plus};

inline const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

// --- errors ----------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class InterfaceNotResolved : public Error {
 public:
  InterfaceNotResolved(Index element, const std::string& what)
      : Error("interface_not_resolved",
              "interface not resolved on element " + std::to_string(element) + ": " + what),
        element_(element) {}
  Index element() const noexcept { return element_; }

 private:
  Index element_;
};

class DegenerateCut : public Error {
 public:
  DegenerateCut(Index element, double measure)
      : Error("degenerate_cut", "degenerate cut on element " + std::to_string(element) +
                                    " (interface measure " + std::to_string(measure) + ")"),
        element_(element) {}
  Index element() const noexcept { return element_; }

 private:
  Index element_;
};

class SingularSystem : public Error {
 public:
  SingularSystem(double pivot_ratio, const std::string& what)
      : Error("singular_system", what), pivot_ratio_(pivot_ratio) {}
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  double pivot_ratio_;
};

class NonFiniteEntry : public Error {
 public:
  NonFiniteEntry(const std::string& where)
      : Error("non_finite", "non-finite entry assembled on " + where) {}
};

// --- affine fields ---------------------------------------------------------

/// Scalar field c + g.x with coefficients taken about the origin.
template <int Dim>
struct AffineScalar {
  double constant = 0.0;
  Point<Dim> gradient = Point<Dim>::Zero();

  double operator()(const Point<Dim>& x) const { return constant + gradient.dot(x); }

  AffineScalar& operator+=(const AffineScalar& o) {
    constant += o.constant;
    gradient += o.gradient;
    return *this;
  }
  friend AffineScalar operator+(AffineScalar a, const AffineScalar& b) { return a += b; }
  friend AffineScalar operator-(AffineScalar a, const AffineScalar& b) {
    a.constant -= b.constant;
    a.gradient -= b.gradient;
    return a;
  }
  friend AffineScalar operator*(double s, AffineScalar a) {
    a.constant *= s;
    a.gradient *= s;
    return a;
  }
  static AffineScalar constant_field(double c) { return {c, Point<Dim>::Zero()}; }
};

/// Vector field c + J x, where J(i, j) = d v_i / d x_j.
template <int Dim>
struct AffineVector {
  Point<Dim> constant = Point<Dim>::Zero();
  Tensor<Dim> gradient = Tensor<Dim>::Zero();

  Point<Dim> operator()(const Point<Dim>& x) const { return constant + gradient * x; }

  AffineVector& operator+=(const AffineVector& o) {
    constant += o.constant;
    gradient += o.gradient;
    return *this;
  }
  friend AffineVector operator+(AffineVector a, const AffineVector& b) { return a += b; }

  /// The field s(x) * direction.
  static AffineVector along(const AffineScalar<Dim>& s, const Point<Dim>& direction) {
    return {s.constant * direction, direction * s.gradient.transpose()};
  }
};

template <int Dim>
Tensor<Dim> strain(const Tensor<Dim>& grad) {
  return 0.5 * (grad + grad.transpose());
}

/// Total stress 2 mu eps(v) - p I for a velocity gradient.
template <int Dim>
Tensor<Dim> stress(double mu, const Tensor<Dim>& grad, double p) {
  return 2.0 * mu * strain<Dim>(grad) - p * Tensor<Dim>::Identity();
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace mife

#pragma once

#include <string>
#include <string_view>

namespace lsadvect {

/// How the kappa parameter of the kappa-gradient is chosen at a node.
///
/// Every variant is evaluated per node and per axis from the local signed
/// Courant number.  sign(0) is 0, so sign-based variants degenerate to the
/// central gradient at stagnation points.
class KappaChoice {
 public:
  enum class Kind {
    Constant,
    UpwindSign,              // kappa = sign(C)
    DownwindSign,            // kappa = -sign(C)
    Central,                 // kappa = 0
    ThirdOrderImplicit,      // kappa = sign(C) (1 + 2|C|) / 3
    ThirdOrderSemiImplicit,  // kappa = sign(C) (1 - |C|) / 3
  };

  KappaChoice() = default;

  /// Constant values outside [-1, 1] are rejected unless explicitly allowed.
  static KappaChoice constant(double value, bool allow_out_of_range = false);
  static KappaChoice upwind() { return KappaChoice(Kind::UpwindSign); }
  static KappaChoice downwind() { return KappaChoice(Kind::DownwindSign); }
  static KappaChoice central() { return KappaChoice(Kind::Central); }
  static KappaChoice third_order_implicit() { return KappaChoice(Kind::ThirdOrderImplicit); }
  static KappaChoice third_order_semi_implicit() { return KappaChoice(Kind::ThirdOrderSemiImplicit); }

  /// Accepts kp, km, k0, k3, k3i and const:<value>.
  static KappaChoice parse(std::string_view name);
  static std::string_view allowed_names() { return "kp, km, k0, k3, k3i, const:<value>"; }

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  std::string name() const;

  double value(double courant) const;

  bool operator==(const KappaChoice&) const = default;

 private:
  explicit KappaChoice(Kind kind, double value = 0.0) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::Central;
  double value_ = 0.0;
};

inline double kappa_value(const KappaChoice& choice, double courant) { return choice.value(courant); }

/// [(1-kappa)(u_i - u_{i-1}) + (1+kappa)(u_{i+1} - u_i)] / (2h)
inline double kappa_gradient(double u_left, double u_center, double u_right, double h, double kappa) {
  return ((1.0 - kappa) * (u_center - u_left) + (1.0 + kappa) * (u_right - u_center)) / (2.0 * h);
}

}  // namespace lsadvect

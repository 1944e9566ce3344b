#include "lsadvect/kappa.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lsadvect/core.hpp"

namespace lsadvect {

KappaChoice KappaChoice::constant(double value, bool allow_out_of_range) {
  if (!std::isfinite(value)) throw std::invalid_argument("kappa must be finite");
  if (!allow_out_of_range && (value < -1.0 || value > 1.0)) {
    throw std::invalid_argument("constant kappa outside [-1, 1]");
  }
  return KappaChoice(Kind::Constant, value);
}

KappaChoice KappaChoice::parse(std::string_view name) {
  if (name == "kp") return upwind();
  if (name == "km") return downwind();
  if (name == "k0") return central();
  if (name == "k3") return third_order_semi_implicit();
  if (name == "k3i") return third_order_implicit();
  constexpr std::string_view prefix = "const:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string text(name.substr(prefix.size()));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("malformed constant kappa '" + text + "'");
    return constant(v);
  }
  throw std::invalid_argument("unknown kappa '" + std::string(name) + "' (allowed: " + std::string(allowed_names()) +
                              ")");
}

std::string KappaChoice::name() const {
  switch (kind_) {
    case Kind::UpwindSign: return "kp";
    case Kind::DownwindSign: return "km";
    case Kind::Central: return "k0";
    case Kind::ThirdOrderSemiImplicit: return "k3";
    case Kind::ThirdOrderImplicit: return "k3i";
    case Kind::Constant: {
      std::ostringstream out;
      out.precision(17);
      out << "const:" << value_;
      return out.str();
    }
  }
  return "?";
}

double KappaChoice::value(double courant) const {
  const double s = sign(courant);
  const double a = std::abs(courant);
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::UpwindSign: return s;
    case Kind::DownwindSign: return -s;
    case Kind::Central: return 0.0;
    case Kind::ThirdOrderImplicit: return s * (1.0 + 2.0 * a) / 3.0;
    case Kind::ThirdOrderSemiImplicit: return s * (1.0 - a) / 3.0;
  }
  return 0.0;
}

}  // namespace lsadvect

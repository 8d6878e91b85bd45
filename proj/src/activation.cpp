#include "hrvfl/activation.hpp"

#include <cmath>

#include "hrvfl/error.hpp"

namespace hrvfl {

std::string_view to_string(Activation act) noexcept {
  switch (act) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "sigmoid";
}

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double activate(double z, Activation act) noexcept {
  switch (act) {
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::relu: return z > 0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
  }
  return z;
}

}  // namespace hrvfl

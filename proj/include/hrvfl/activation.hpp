#pragma once

#include <string>
#include <string_view>

namespace hrvfl {

enum class Activation { sigmoid, relu, tanh };

std::string_view to_string(Activation act) noexcept;
/// Parses "sigmoid", "relu" or "tanh"; throws ConfigError otherwise.
Activation parse_activation(std::string_view name);

double activate(double z, Activation act) noexcept;

}  // namespace hrvfl

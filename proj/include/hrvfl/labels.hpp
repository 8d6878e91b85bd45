#pragma once

#include <string>

namespace hrvfl {

/// Original class values behind the internal -1 / +1 encoding.
struct LabelMapping {
  std::string negative = "-1";
  std::string positive = "1";

  const std::string& original(double encoded) const { return encoded < 0 ? negative : positive; }
  bool operator==(const LabelMapping&) const = default;
};

}  // namespace hrvfl

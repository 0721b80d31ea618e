#pragma once

#include <cstdint>
#include <string>

namespace dwalk {

/// Locale-free, 12 significant digits; "inf", "-inf", "nan" spelled literally.
std::string format_real(double v);

/// FNV-1a, 64-bit, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

inline constexpr const char* kToolVersion = "dwalk 1.0.0";

} // namespace dwalk

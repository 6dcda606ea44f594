#include "nvdd/units.h"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace nvdd::units {
namespace {

struct Unit {
  std::string_view suffix;
  double scale;
};

// Longest suffix first so "ms" is not read as "s".
constexpr std::array<Unit, 4> kFrequency{{{"GHz", 1e9}, {"MHz", 1e6}, {"kHz", 1e3}, {"Hz", 1.0}}};
constexpr std::array<Unit, 4> kTime{{{"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"s", 1.0}}};
constexpr std::array<Unit, 1> kAngle{{{"deg", 1.0}}};

template <size_t N>
std::optional<double> parse_with(std::string_view text, const std::array<Unit, N>& table) {
  for (const Unit& u : table) {
    if (text.size() > u.suffix.size() && text.ends_with(u.suffix)) {
      auto v = parse_double(text.substr(0, text.size() - u.suffix.size()));
      if (!v) return std::nullopt;
      return *v * u.scale;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::optional<double> parse_quantity(std::string_view text, Dimension dim) {
  switch (dim) {
    case Dimension::Frequency:
      return parse_with(text, kFrequency);
    case Dimension::Time:
      return parse_with(text, kTime);
    case Dimension::Angle:
      return parse_with(text, kAngle);
  }
  return std::nullopt;
}

std::string format_quantity(double value, Dimension dim) {
  if (dim == Dimension::Angle) return format_double(value) + "deg";
  const Unit* begin = nullptr;
  const Unit* end = nullptr;
  if (dim == Dimension::Frequency) {
    begin = kFrequency.data();
    end = begin + kFrequency.size();
  } else {
    // Ordered large to small for display: s, ms, us, ns.
    static constexpr std::array<Unit, 4> kTimeDisplay{{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}};
    begin = kTimeDisplay.data();
    end = begin + kTimeDisplay.size();
  }
  const Unit* base = dim == Dimension::Frequency ? end - 1 : begin;
  if (value == 0) return "0" + std::string(base->suffix);
  for (const Unit* u = begin; u != end; ++u) {
    if (std::abs(value) < u->scale && u != end - 1) continue;
    const std::string text = format_double(value / u->scale) + std::string(u->suffix);
    auto back = parse_quantity(text, dim);
    if (back && *back == value) return text;
  }
  return format_double(value) + std::string(base->suffix);
}

std::optional<double> parse_angle_rad(std::string_view text) {
  if (text.ends_with("pi")) {
    std::string_view coeff = text.substr(0, text.size() - 2);
    double c = 1.0;
    if (coeff == "-") {
      c = -1.0;
    } else if (!coeff.empty()) {
      if (coeff.back() == '*') coeff.remove_suffix(1);
      auto v = parse_double(coeff);
      if (!v) return std::nullopt;
      c = *v;
    }
    return c * std::numbers::pi;
  }
  return parse_double(text);
}

}  // namespace nvdd::units

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace eo
{

/// 128-bit random event identifier, rendered as 32 lowercase hex digits.
struct EventId
{
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  static EventId generate();
  static std::optional<EventId> parse(std::string_view hex);

  std::string hex() const;
  /// First six hex digits, the way event logs usually display ids.
  std::string short_hex() const { return hex().substr(0, 6); }
  bool nil() const { return hi == 0 && lo == 0; }

  friend auto operator<=>(const EventId &, const EventId &) = default;
};

struct IndividualRef
{
  EventId id;
  friend auto operator<=>(const IndividualRef &, const IndividualRef &) = default;
};

/// Null | Numeric | String | IndividualRef. Booleans are Numeric 0/1.
using Scalar = std::variant<std::monostate, double, std::string, IndividualRef>;

inline bool is_null(const Scalar & v) { return std::holds_alternative<std::monostate>(v); }

/// Shortest round-trip decimal rendering; integral values print without a fraction.
std::string format_number(double value);

/// Canonical string form used by strict equality and for display.
/// Null renders as the empty string, references as the hex id.
std::string canonical(const Scalar & v);

/// Numeric view of a scalar: numbers as-is, strings that spell a number, otherwise nullopt.
std::optional<double> to_number(const Scalar & v);

std::optional<double> parse_number(std::string_view text);

/// Exact equality: same alternative and same payload.
bool same_value(const Scalar & a, const Scalar & b);

}  // namespace eo

template <>
struct std::hash<eo::EventId>
{
  std::size_t operator()(const eo::EventId & id) const noexcept
  {
    return static_cast<std::size_t>(id.hi ^ (id.lo * 0x9e3779b97f4a7c15ULL));
  }
};

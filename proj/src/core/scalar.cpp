#include "eo/core/scalar.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <random>

namespace eo
{

EventId EventId::generate()
{
  thread_local std::mt19937_64 rng{[] {
    std::random_device rd;
    std::seed_seq seq{rd(), rd(), rd(), rd()};
    return std::mt19937_64{seq};
  }()};
  EventId id;
  do {
    id.hi = rng();
    id.lo = rng();
  } while (id.nil());
  return id;
}

std::optional<EventId> EventId::parse(std::string_view hex)
{
  if (hex.size() != 32) return std::nullopt;
  EventId id;
  auto read = [](std::string_view part, std::uint64_t & out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out, 16);
    return ec == std::errc{} && ptr == part.data() + part.size();
  };
  for (char c : hex) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
  }
  if (!read(hex.substr(0, 16), id.hi) || !read(hex.substr(16), id.lo)) return std::nullopt;
  return id;
}

std::string EventId::hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = digits[(hi >> (4 * i)) & 0xf];
    out[31 - i] = digits[(lo >> (4 * i)) & 0xf];
  }
  return out;
}

std::string format_number(double value)
{
  if (std::isfinite(value) && value == std::trunc(value) && std::fabs(value) < 9.007199254740992e15) {
    return std::to_string(static_cast<long long>(value));
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string canonical(const Scalar & v)
{
  return std::visit(
    [](const auto & x) -> std::string {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, std::monostate>) {
        return "";
      } else if constexpr (std::is_same_v<T, double>) {
        return format_number(x);
      } else if constexpr (std::is_same_v<T, std::string>) {
        return x;
      } else {
        return x.id.hex();
      }
    },
    v);
}

std::optional<double> parse_number(std::string_view text)
{
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return out;
}

std::optional<double> to_number(const Scalar & v)
{
  if (const auto * d = std::get_if<double>(&v)) return *d;
  if (const auto * s = std::get_if<std::string>(&v)) return parse_number(*s);
  return std::nullopt;
}

bool same_value(const Scalar & a, const Scalar & b)
{
  return a == b;
}

}  // namespace eo

#include "tracksketch/rng.hpp"

#include <cmath>
#include <numbers>

namespace tracksketch {

__extension__ using u128 = unsigned __int128;

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Lemire's multiply-shift.
  const auto r = static_cast<u128>(next_u64()) * span;
  return lo + static_cast<std::int64_t>(r >> 64);
}

double Rng::normal() noexcept {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace tracksketch

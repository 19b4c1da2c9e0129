#include "coalesce/rng.hpp"

#include <cmath>
#include <limits>

namespace coalesce {

std::uint64_t Rng::below(std::uint64_t bound) {
  unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::exponential() { return -std::log(uniform_pos()); }

std::uint64_t Rng::geometric_skip(double p) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (p <= 0.0) return kMax;
  if (p >= 1.0) return 0;
  const double skip = std::floor(std::log(uniform_pos()) / std::log1p(-p));
  if (!(skip < 1.8e19)) return kMax;
  return static_cast<std::uint64_t>(skip);
}

}  // namespace coalesce

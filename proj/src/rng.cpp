#include "copreg/rng.hpp"

#include "copreg/normal.hpp"

namespace copreg {

double UniformStream::uniform() {
  // 53 random bits, shifted by half a unit so 0 and 1 are never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double UniformStream::normal() { return norm_quantile(uniform()); }

} // namespace copreg

#pragma once

#include <cstdint>
#include <random>

namespace copreg {

/// Seeded uniform stream on the open interval (0, 1).
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard,
/// so draws are identical across platforms. Normal variates come from the
/// inverse CDF rather than a rejection method for the same reason.
class UniformStream {
public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();

private:
  std::mt19937_64 engine_;
};

} // namespace copreg

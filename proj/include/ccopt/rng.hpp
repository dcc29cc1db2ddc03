#pragma once

#include <cstdint>
#include <random>

namespace ccopt {

// Seed for an independent substream, derived from a master seed and a stream
// index by the splitmix64 output function. Parallel and serial runs that use
// per-task substreams therefore see identical draws.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_index);

// mt19937_64 with explicit variate transforms. The standard pins the
// mt19937_64 bit stream, and the transforms below avoid the
// implementation-defined std::*_distribution adaptors, so sequences
// replicate bit-exactly across compilers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Uniform on the open interval (0,1): 53-bit lattice offset by half a step.
  double uniform_open01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double mean);

  // Box-Muller; the second variate of each pair is cached.
  double normal(double mean, double sd);

  // Geometric on {1, 2, ...} by inverse CDF: ceil(log U / log(1 - xi)).
  std::int64_t geometric(double xi);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ccopt

#pragma once

#include <cstdint>

namespace workbench {

// splitmix64: tiny, fully portable generator. All randomized suites in the
// workbench derive from it so that a fixed seed gives byte-identical output
// on every platform (libstdc++ distributions are not portable).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform-ish in [0, bound); bound >= 1
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  bool coin() { return (next() & 1u) != 0; }

  // independent child stream, stable under insertion of other draws
  SplitMix64 fork(std::uint64_t stream_id) const {
    return SplitMix64(state_ ^ (0xa0761d6478bd642fULL * (stream_id + 1)));
  }

private:
  std::uint64_t state_;
};

} // namespace workbench

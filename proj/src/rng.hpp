#pragma once

#include <cstdint>

#include "linalg.hpp"

namespace mixlab {

// Counter-based stream: the n-th draw is a pure function of
// (seed, chain_id, n). Streams with distinct chain_id are independent;
// a stream is owned by one chain at a time and is cheap to reposition,
// so its whole state is the draw counter.
//
// Philox4x32-10 (Salmon et al., SC'11). The 128-bit counter block holds
// the chain id in its high two words and the draw counter in the low two;
// the 64-bit key is the seed. One block yields two u64 draws.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t chain_id);

  uint64_t seed() const { return seed_; }
  uint64_t chain_id() const { return chain_id_; }
  uint64_t counter() const { return counter_; }
  void seek(uint64_t counter) { counter_ = counter; }

  uint64_t next_u64();
  // Uniform on [0, 1), 53-bit resolution.
  double next_uniform();
  // One Box-Muller pair of standard normals; consumes exactly 2 u64 draws.
  void next_gaussian_pair(double* a, double* b);

 private:
  void run_block(uint64_t block_index, uint64_t out[2]) const;

  uint64_t seed_;
  uint64_t chain_id_;
  uint64_t counter_ = 0;
  mutable uint64_t cached_block_ = ~0ull;
  mutable uint64_t cache_[2] = {0, 0};
};

// Purpose tags keep independent uses of the same seed on disjoint streams.
enum class StreamPurpose : uint64_t {
  kChain = 0,       // one stream per sampling chain
  kPrior = 1,       // world prior draws
  kEmbedding = 2,   // embedding map construction
  kTraining = 3,    // dataset shuffling / weight init
};

RngStream stream_for(uint64_t seed, StreamPurpose purpose, uint64_t index);

// d independent standard-normal draws; consumes exactly 2*ceil(d/2) u64
// draws regardless of history, so the stream position after a call is a
// fixed function of d.
Vec gaussian_draw(RngStream& rng, int d);

}  // namespace mixlab

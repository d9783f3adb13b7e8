#include "rng.hpp"

#include <cmath>

namespace mixlab {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(uint32_t ctr[4], const uint32_t key[2]) {
  uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * ctr[0];
  uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * ctr[2];
  uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  uint32_t out0 = hi1 ^ ctr[1] ^ key[0];
  uint32_t out1 = lo1;
  uint32_t out2 = hi0 ^ ctr[3] ^ key[1];
  uint32_t out3 = lo0;
  ctr[0] = out0;
  ctr[1] = out1;
  ctr[2] = out2;
  ctr[3] = out3;
}

inline void philox10(uint32_t ctr[4], uint32_t key[2]) {
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, key);
    if (round != 9) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
  }
}

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t chain_id) : seed_(seed), chain_id_(chain_id) {}

void RngStream::run_block(uint64_t block_index, uint64_t out[2]) const {
  uint32_t ctr[4] = {
      static_cast<uint32_t>(block_index),
      static_cast<uint32_t>(block_index >> 32),
      static_cast<uint32_t>(chain_id_),
      static_cast<uint32_t>(chain_id_ >> 32),
  };
  uint32_t key[2] = {static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)};
  philox10(ctr, key);
  out[0] = (static_cast<uint64_t>(ctr[1]) << 32) | ctr[0];
  out[1] = (static_cast<uint64_t>(ctr[3]) << 32) | ctr[2];
}

uint64_t RngStream::next_u64() {
  uint64_t block = counter_ >> 1;
  if (block != cached_block_) {
    run_block(block, cache_);
    cached_block_ = block;
  }
  return cache_[counter_++ & 1];
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

void RngStream::next_gaussian_pair(double* a, double* b) {
  // u1 in (0,1] so the log is finite.
  double u1 = 1.0 - next_uniform();
  double u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  *a = r * std::cos(2.0 * M_PI * u2);
  *b = r * std::sin(2.0 * M_PI * u2);
}

RngStream stream_for(uint64_t seed, StreamPurpose purpose, uint64_t index) {
  // 16 purpose bits, 48 index bits.
  return RngStream(seed, (static_cast<uint64_t>(purpose) << 48) | (index & 0xFFFFFFFFFFFFull));
}

Vec gaussian_draw(RngStream& rng, int d) {
  Vec out(d);
  double a = 0.0, b = 0.0;
  for (int i = 0; i + 1 < d; i += 2) {
    rng.next_gaussian_pair(&a, &b);
    out[i] = a;
    out[i + 1] = b;
  }
  if (d & 1) {
    rng.next_gaussian_pair(&a, &b);  // sin branch discarded
    out[d - 1] = a;
  }
  return out;
}

}  // namespace mixlab

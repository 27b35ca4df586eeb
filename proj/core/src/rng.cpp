#include "zerofid/rng.hpp"

#include <cmath>

#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(p >> 64);
  return static_cast<std::uint64_t>(p);
}

inline void philox_round(std::uint64_t ctr[4], const std::uint64_t key[2]) {
  std::uint64_t hi0, hi1;
  std::uint64_t lo0 = mulhilo(kPhiloxM0, ctr[0], &hi0);
  std::uint64_t lo1 = mulhilo(kPhiloxM1, ctr[2], &hi1);
  std::uint64_t out0 = hi1 ^ ctr[1] ^ key[0];
  std::uint64_t out1 = lo1;
  std::uint64_t out2 = hi0 ^ ctr[3] ^ key[1];
  std::uint64_t out3 = lo0;
  ctr[0] = out0;
  ctr[1] = out1;
  ctr[2] = out2;
  ctr[3] = out3;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void philox4x64_block(const std::uint64_t key[2], const std::uint64_t ctr[4],
                      std::uint64_t out[4]) {
  std::uint64_t k[2] = {key[0], key[1]};
  for (int i = 0; i < 4; ++i) out[i] = ctr[i];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    philox_round(out, k);
  }
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view tag,
                     std::uint64_t task_index, std::uint64_t subtask_index)
    : key_{master_seed, fnv1a64(tag)},
      ctr_{0, task_index, subtask_index, 0},
      buf_pos_(4),
      cached_normal_(0.0),
      has_cached_normal_(false) {}

RngStream RngStream::substream(std::uint64_t subtask_index) const {
  RngStream child = *this;
  child.ctr_[0] = 0;
  child.ctr_[2] = subtask_index;
  child.ctr_[3] = 0;
  child.buf_pos_ = 4;
  child.has_cached_normal_ = false;
  return child;
}

RngStream RngStream::task_stream(std::uint64_t task_index) const {
  RngStream child = *this;
  child.ctr_[0] = 0;
  child.ctr_[1] = task_index;
  child.ctr_[2] = 0;
  child.ctr_[3] = 0;
  child.buf_pos_ = 4;
  child.has_cached_normal_ = false;
  return child;
}

void RngStream::refill() {
  philox4x64_block(key_, ctr_, buf_);
  ++ctr_[0];
  buf_pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_int: bound must be nonzero");
  std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace zerofid

#pragma once

#include <cstdint>
#include <string_view>

namespace zerofid {

std::uint64_t fnv1a64(std::string_view s);

// Philox-4x64 with 10 rounds (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC'11).  Counter-based: the output stream is a pure
// function of (key, counter), so logical streams can be handed to worker
// threads in any order and replay is exact.
//
// Stream identity is (master_seed, tag, task_index, subtask_index):
//   key     = (master_seed, fnv1a64(tag))
//   counter = (block, task_index, subtask_index, 0)
// with `block` advancing once per 4-output batch.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view tag,
            std::uint64_t task_index = 0, std::uint64_t subtask_index = 0);

  // Same key and task index, fresh counter plane for the given subtask.
  RngStream substream(std::uint64_t subtask_index) const;

  // Same key, fresh counter plane for the given task (subtask reset to 0);
  // hands each parallel task an independent stream.  Collisions are avoided
  // by numbering derived tasks/subtasks from 1 and never drawing directly
  // from a stream that also hands out index 0.
  RngStream task_stream(std::uint64_t task_index) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller; pairs are cached.
  double normal();

  // Uniform on {0, ..., bound-1} by rejection; bound must be nonzero.
  std::uint64_t uniform_int(std::uint64_t bound);

 private:
  void refill();

  std::uint64_t key_[2];
  std::uint64_t ctr_[4];
  std::uint64_t buf_[4];
  int buf_pos_;
  double cached_normal_;
  bool has_cached_normal_;
};

// One 4-word Philox block; exposed for the known-answer tests.
void philox4x64_block(const std::uint64_t key[2], const std::uint64_t ctr[4],
                      std::uint64_t out[4]);

}  // namespace zerofid

// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTL_RNG_HPP
#define QTL_RNG_HPP

#include <cstdint>
#include <random>

namespace qtl {

/// A named, reproducible random stream. Two streams constructed from the
/// same (seed, stream_id) produce identical sequences.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent child stream; does not advance this stream.
  RngStream substream(std::uint64_t id) const;

  /// Draws a fresh key from this stream and returns a family root for
  /// chunked parallel work. Advances this stream by one draw.
  RngStream fork();

  double normal();
  double uniform();
  std::uint64_t next_u64();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace qtl

#endif  // QTL_RNG_HPP

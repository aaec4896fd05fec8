// Copyright 2026 The CBwLC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBWLC_RNG_H_
#define CBWLC_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace cbwlc {

// Seeded random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the conversions below are written out so that
// streams are bit-identical across standard library implementations (the
// std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(Mix(seed), 0) {}

  // Derives an independent child stream, e.g. one for the environment and
  // one for the learners of the same replication.
  Rng Fork(std::uint64_t stream_id) const {
    return Rng(Mix(seed_hint_ ^ Mix(stream_id + 0x632be59bd9b4e019ULL)), 0);
  }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via the Marsaglia polar method.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * Uniform() - 1.0;
      v = 2.0 * Uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Inverse-CDF draw from a probability vector. Falls back to the last index
  // with positive mass when round-off leaves the running sum short of u.
  int Categorical(std::span<const double> probs) {
    const double u = Uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    return last_positive;
  }

 private:
  Rng(std::uint64_t mixed_seed, int)
      : engine_(mixed_seed), seed_hint_(mixed_seed) {}

  // splitmix64 finalizer.
  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  std::uint64_t seed_hint_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cbwlc

#endif  // CBWLC_RNG_H_

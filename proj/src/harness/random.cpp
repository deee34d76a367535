/*
 * Copyright 2026 The mlsched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "mlsched/harness/random.hpp"

#include <cmath>
#include <stdexcept>

namespace mlsched::harness {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 named_stream(std::uint64_t master_seed, std::string_view name) {
  return std::mt19937_64(splitmix64(master_seed ^ fnv1a64(name)));
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + u01(rng) * (hi - lo);
}

double exponential(std::mt19937_64& rng, double rate) {
  if (rate <= 0.0) throw std::invalid_argument("exponential rate must be > 0");
  return -std::log1p(-u01(rng)) / rate;
}

double gaussian(std::mt19937_64& rng, double mean, double sd) {
  const double u1 = u01(rng);
  const double u2 = u01(rng);
  // log argument stays in (0, 1]: u1 < 1 by construction.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
  return mean + sd * r * std::cos(theta);
}

}  // namespace mlsched::harness

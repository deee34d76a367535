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
#ifndef MLSCHED_HARNESS_RANDOM_HPP
#define MLSCHED_HARNESS_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace mlsched::harness {

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

/// Independent generator for one named component of a run. Streams are
/// derived by hashing the component name into the master seed, so adding
/// or reordering consumers never perturbs the other streams.
std::mt19937_64 named_stream(std::uint64_t master_seed, std::string_view name);

/// Uniform in [0, 1) with 53 random bits. The distributions below are
/// hand-rolled on top of this instead of <random>'s distribution objects,
/// whose output is implementation-defined and would break cross-platform
/// reproducibility of the logs.
double u01(std::mt19937_64& rng);

double uniform_range(std::mt19937_64& rng, double lo, double hi);

/// Inverse-CDF exponential draw, -log1p(-u)/rate. Used for poisson
/// process inter-arrival gaps.
double exponential(std::mt19937_64& rng, double rate);

/// Box-Muller normal draw; consumes two uniforms per call and discards
/// the paired variate so call sites stay stateless.
double gaussian(std::mt19937_64& rng, double mean = 0.0, double sd = 1.0);

}  // namespace mlsched::harness

#endif  // MLSCHED_HARNESS_RANDOM_HPP

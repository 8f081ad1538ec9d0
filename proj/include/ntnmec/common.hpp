/*
Copyright 2026 The ntnmec Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace ntnmec {

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised for malformed or schema-violating configuration documents. The
/// message always starts with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a produced allocation fails one of the C2..C8 checks (or C1
/// for a task reported as feasible).
class ConstraintViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised by the exhaustive oracle when an instance exceeds its limits.
class InstanceTooLarge : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

/// Seed for an independent stream `stream` under the master seed `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix_seed(seed ^ mix_seed(stream * 0xD1B54A32D192ED03ULL + 1U));
}

/// Stream identifiers. Keeping them fixed means a sweep over pool sizes never
/// shifts the geometry or fading draws.
namespace streams {
inline constexpr std::uint64_t kGeometry = 0x6E0;
inline constexpr std::uint64_t kTasks = 0x7A5;
inline constexpr std::uint64_t kAccessFading = 0xFAD0;  // + UAV index
}  // namespace streams

}  // namespace ntnmec

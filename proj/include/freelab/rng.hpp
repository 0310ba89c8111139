// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace freelab {

/// A seeded random stream identified by a path of 64-bit keys rooted at the
/// master seed. Streams with the same path produce the same sequence;
/// `stream(tag, index)` derives an independent child. Parallel tasks take a
/// child keyed by their task index, so results never depend on scheduling.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t master_seed);

    RandomSource stream(std::string_view tag, std::uint64_t index) const;

    std::mt19937_64& engine() noexcept { return engine_; }
    const std::vector<std::uint64_t>& path() const noexcept { return path_; }
    std::uint64_t master_seed() const noexcept { return path_.front(); }

    double normal(double stddev = 1.0);
    double uniform();

private:
    explicit RandomSource(std::vector<std::uint64_t> path);

    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a(std::string_view text) noexcept;

}  // namespace freelab

// SPDX-License-Identifier: Apache-2.0
#include "freelab/rng.hpp"

namespace freelab {

namespace {

std::mt19937_64 seeded_engine(const std::vector<std::uint64_t>& path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * path.size());
    for (auto key : path) {
        words.push_back(static_cast<std::uint32_t>(key));
        words.push_back(static_cast<std::uint32_t>(key >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

RandomSource::RandomSource(std::uint64_t master_seed)
    : RandomSource(std::vector<std::uint64_t>{master_seed}) {}

RandomSource::RandomSource(std::vector<std::uint64_t> path)
    : path_(std::move(path)), engine_(seeded_engine(path_)) {}

RandomSource RandomSource::stream(std::string_view tag, std::uint64_t index) const {
    auto child = path_;
    child.push_back(fnv1a(tag));
    child.push_back(index);
    return RandomSource(std::move(child));
}

double RandomSource::normal(double stddev) {
    std::normal_distribution<double> dist(0.0, stddev);
    return dist(engine_);
}

double RandomSource::uniform() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
}

}  // namespace freelab

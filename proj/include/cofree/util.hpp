#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace cofree {

/// SplitMix64 finaliser; mixes a stream of integers into a child seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Callers write results by index so output order is fixed.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace cofree

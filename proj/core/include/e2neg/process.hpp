#pragma once

#include <cstdint>

namespace e2neg {

// Resident set size of this process, from /proc/self/status. Returns 0 where
// the information is unavailable.
std::int64_t current_rss_bytes();
std::int64_t peak_rss_bytes();

}  // namespace e2neg

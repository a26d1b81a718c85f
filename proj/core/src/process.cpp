#include "e2neg/process.hpp"

#include <fstream>
#include <string>

namespace e2neg {

namespace {

std::int64_t status_field_kb(const std::string& key) {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) == 0) {
      return std::stoll(line.substr(key.size())) * 1024;
    }
  }
  return 0;
}

}  // namespace

std::int64_t current_rss_bytes() { return status_field_kb("VmRSS:"); }
std::int64_t peak_rss_bytes() { return status_field_kb("VmHWM:"); }

}  // namespace e2neg

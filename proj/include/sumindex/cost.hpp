#pragma once

#include <cstdint>

namespace sumindex::cost {

/// Advice reads are charged to whichever counter is installed on the current
/// thread. Code outside a ProbeScope charges nothing.
void add_probes(std::uint64_t words) noexcept;

class ProbeScope {
 public:
  explicit ProbeScope(std::uint64_t& sink) noexcept;
  ~ProbeScope();
  ProbeScope(const ProbeScope&) = delete;
  ProbeScope& operator=(const ProbeScope&) = delete;

 private:
  std::uint64_t* previous_;
};

}  // namespace sumindex::cost

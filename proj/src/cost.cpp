#include "sumindex/cost.hpp"

namespace sumindex::cost {

namespace {
thread_local std::uint64_t* active_sink = nullptr;
}

void add_probes(std::uint64_t words) noexcept {
  if (active_sink != nullptr) *active_sink += words;
}

ProbeScope::ProbeScope(std::uint64_t& sink) noexcept : previous_(active_sink) {
  active_sink = &sink;
}

ProbeScope::~ProbeScope() { active_sink = previous_; }

}  // namespace sumindex::cost

#include "sumindex/standalone.hpp"

#include "sumindex/cost.hpp"
#include "sumindex/mixing.hpp"

namespace sumindex {

FunctionSpec random_function(std::uint64_t seed, std::uint64_t domain, std::uint64_t range) {
  const std::uint64_t key = mix64(seed ^ 0x7F4A7C159E3779B9ULL);
  return FunctionSpec(domain, range,
                      [key, range](std::uint64_t x) { return reduce(splitmix_at(key, x), range); });
}

InversionCopy::InversionCopy(FunctionSpec f, InversionAdvice advice, std::uint64_t preprocess_evals)
    : f_(std::move(f)), advice_(std::move(advice)), preprocess_evals_(preprocess_evals) {}

std::optional<std::uint64_t> InversionCopy::query(std::uint64_t y, QueryStats* stats) const {
  std::uint64_t probes = 0;
  const std::uint64_t before = f_.evaluations();
  std::optional<std::uint64_t> x;
  {
    cost::ProbeScope scope(probes);
    x = invert(advice_, f_, y);
  }
  if (stats) {
    stats->evals += f_.evaluations() - before;
    stats->probes += probes;
  }
  return x;
}

WeakBuilder inversion_builder(FunctionSpec f, ParamPlan plan, std::uint64_t seed) {
  return [f, plan, seed](std::uint64_t k) -> std::unique_ptr<WeakInverter> {
    FunctionSpec local = f;
    local.reset_evaluations();
    InversionAdvice adv =
        preprocess_inversion(local, plan, derive_key(seed, 2 * k), derive_key(seed, 2 * k + 1));
    const std::uint64_t evals = local.evaluations();
    local.reset_evaluations();
    return std::make_unique<InversionCopy>(std::move(local), std::move(adv), evals);
  };
}

}  // namespace sumindex

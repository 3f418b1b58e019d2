#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "biwave/core.hpp"
#include "biwave/params.hpp"

namespace biwave {

/// Immutable (x, t) -> u map produced by every solver and by the oracle.
/// Evaluation is deterministic and re-entrant.
class SolutionEvaluator {
 public:
  enum class Provenance { solver_1d, solver_odd, solver_even, duhamel, oracle, synthetic };

  SolutionEvaluator() = default;
  SolutionEvaluator(BiwaveParams params, Provenance from,
                    std::function<double(const Point&, double)> fn)
      : params_(params), from_(from),
        fn_(std::make_shared<std::function<double(const Point&, double)>>(std::move(fn))) {}

  double operator()(const Point& x, double t) const {
    if (x.dim() != params_.n) fail(errc::dimension_mismatch, "solution eval: point dimension");
    return (*fn_)(x, t);
  }

  const BiwaveParams& params() const { return params_; }
  Provenance provenance() const { return from_; }
  int dim() const { return params_.n; }
  bool valid() const { return fn_ != nullptr; }

 private:
  BiwaveParams params_{1.0, 0.5, 1};
  Provenance from_ = Provenance::synthetic;
  std::shared_ptr<std::function<double(const Point&, double)>> fn_;
};

inline const char* provenance_name(SolutionEvaluator::Provenance p) {
  using P = SolutionEvaluator::Provenance;
  switch (p) {
    case P::solver_1d: return "solver-1d";
    case P::solver_odd: return "solver-odd";
    case P::solver_even: return "solver-even";
    case P::duhamel: return "duhamel";
    case P::oracle: return "oracle";
    case P::synthetic: return "synthetic";
  }
  return "unknown";
}

}  // namespace biwave

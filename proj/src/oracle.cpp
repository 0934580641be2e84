#include "fncr/oracle.hpp"

namespace fncr {

double RegularizedOracle::shift() const {
  switch (mode_) {
    case RegMode::None:
      return 0.0;
    case RegMode::Constant:
      return param_;
    case RegMode::GradientReg:
      if (!cache_set_)
        throw ConfigError("gradient-regularized product requested with no frozen iterate");
      return param_ * cached_sqrt_gnorm_;
  }
  return 0.0;
}

Vec RegularizedOracle::hvp(const Vec& x, const Vec& v) {
  Vec hv = oracle_->eval_hvp(x, v);
  const double h = shift();
  if (h != 0.0) axpy(h, v, hv);
  return hv;
}

}  // namespace fncr

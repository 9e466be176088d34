#include "mobring/units.hpp"

#include "mobring/errors.hpp"

#include <cmath>

namespace mobring {

void UnitConverter::validate() const {
    if (!(xi_per_ps > 0.0) || !std::isfinite(xi_per_ps)) {
        throw ConfigError("xi_scale_per_ps must be a finite value > 0");
    }
}

}  // namespace mobring

#include "nanolaser/ssa.hpp"

namespace nanolaser {

void SsaConfig::validate() const {
    if (!(t_end > 0.0)) throw Error("ssa: t_end must be positive");
    if (max_steps < 1) throw Error("ssa: max_steps must be at least 1");
}

} // namespace nanolaser

#include "tripod/schedule.hpp"

#include <stdexcept>

namespace tripod {

double PulseSchedule::t3(int j) const {
    if (j == 1) return 4.0 * sigma_t;
    if (j == 2) return 12.0 * sigma_t + free_time;
    throw std::domain_error("pulse index must be 1 or 2");
}

std::array<double, 3> pulse_centers(int j, const PulseSchedule& sched) {
    const double t3 = sched.t3(j);
    const double lead = sched.eta * sched.sigma_t;
    if (j == 2 && sched.mirror_second) return {t3 + lead, t3 - lead, t3};
    return {t3 - lead, t3 + lead, t3};
}

}  // namespace tripod

#pragma once

// Budget clocks.  A live deadline means wall time, but when several
// independent solves share cores, one solve's wall clock counts the others'
// work.  The per-thread CPU clock meters only the calling solver's own
// effort, so co-scheduled benchmark runs keep their budgets — and their
// results — independent of how the scheduler interleaves them.

#include <chrono>
#include <ctime>

namespace routeopt::detail {

inline double now_ms(bool thread_cpu = false) {
    if (thread_cpu) {
        timespec ts{};
        clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
        return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) / 1e6;
    }
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace routeopt::detail

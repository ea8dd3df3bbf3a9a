#pragma once

#include <mutex>

namespace rnd::detail {

// FFTW planning is not thread safe; plan execution on private buffers is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace rnd::detail

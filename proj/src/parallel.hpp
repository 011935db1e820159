#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace pnt::detail {

// Runs fn(k) for k in [0, n). Iterations must write disjoint outputs.
// The first exception thrown by any iteration is rethrown on the caller.
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        try {
            fn(k);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace pnt::detail

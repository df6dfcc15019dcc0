#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

namespace optodicke {

// Every data-parallel kernel takes an execution policy. The serial path is
// the reference; the parallel path must produce bit-identical output because
// each index writes only its own slot.
enum class Exec { serial, parallel };

// Runs body(i) for i in [0, n). Under Exec::parallel, an exception thrown by
// any index is rethrown after the loop; the lowest failing index wins so the
// reported error does not depend on scheduling.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& body) {
    const auto count = static_cast<std::int64_t>(n);
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
        return;
    }
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void set_thread_count(int n);
int thread_count();

} // namespace optodicke

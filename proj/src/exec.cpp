#include "optodicke/exec.hpp"

#include <omp.h>

#include "optodicke/error.hpp"

namespace optodicke {

void set_thread_count(int n) {
    require(n >= 1, "thread count must be >= 1");
    omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

} // namespace optodicke

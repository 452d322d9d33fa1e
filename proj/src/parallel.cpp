// Copyright 2026 The QResNet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qres/parallel.hpp"

#ifdef QRES_HAVE_OPENMP
#include <omp.h>
#endif

namespace qres {

void set_thread_count(std::size_t n) {
#ifdef QRES_HAVE_OPENMP
    omp_set_num_threads(n == 0 ? omp_get_num_procs() : static_cast<int>(n));
#else
    (void)n;
#endif
}

std::size_t thread_count() {
#ifdef QRES_HAVE_OPENMP
    return static_cast<std::size_t>(omp_get_max_threads());
#else
    return 1;
#endif
}

} // namespace qres

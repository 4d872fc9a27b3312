#include "nbt/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nbt {

namespace {

int read_thread_cap() {
#ifdef _OPENMP
    int cap = omp_get_max_threads();
#else
    int cap = 1;
#endif
    if (const char* env = std::getenv("NBT_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested >= 1) cap = requested;
        } catch (const std::exception&) {
            // malformed value: keep the default
        }
    }
    return cap;
}

}  // namespace

int max_threads() {
    static const int cap = read_thread_cap();
    return cap;
}

}  // namespace nbt

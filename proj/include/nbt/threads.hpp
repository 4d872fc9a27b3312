#pragma once

namespace nbt {

/// Thread cap for all parallel kernels: the value of NBT_THREADS when set to
/// a positive integer, otherwise the OpenMP default.  Read once per process.
int max_threads();

}  // namespace nbt

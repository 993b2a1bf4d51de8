#pragma once

namespace bt {

// Caps intra-stage parallelism (OpenMP worker count). n <= 0 restores the
// default. All parallel kernels produce output identical to their serial
// reference regardless of this setting.
void set_max_threads(int n);
int max_threads();

}  // namespace bt

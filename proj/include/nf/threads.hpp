#pragma once

namespace nf {

// Worker count for parallel kernels: OpenMP's default, capped by the
// NULLITY_FORGE_THREADS environment variable when set to a positive integer.
// Returns 1 when built without OpenMP.
int thread_cap();

}  // namespace nf

#pragma once

namespace platoonlab {

/// Execution mode for the grid-sweep kernels. Every parallel kernel has a
/// serial twin that produces bit-identical results; the parallel path is the
/// default, the serial path is kept as the reference for tests and for the
/// benchmark comparison.
enum class Execution { serial, parallel };

/// Thread cap for the parallel kernels: min(hardware, PLATOONLAB_THREADS).
int max_threads();

}  // namespace platoonlab

#pragma once

namespace osg {

// Reduced Planck constant, J s. Pinned (rather than taken from a units
// library) so that serialized outputs and regression baselines cannot drift.
inline constexpr double hbar = 1.054571817e-34;

// Embedded in every serialized output in place of a timestamp, so reruns of
// the same configuration stay byte-identical while tool revisions remain
// distinguishable.
inline constexpr const char* version = "0.1.0";

}  // namespace osg

// SPDX-License-Identifier: MIT
#pragma once

#include "openable/Mesh.h"

namespace openable {

double iou3d(const Aabb& a, const Aabb& b);

/// Generalized IoU of two axis-aligned boxes: IoU minus the fraction of the
/// enclosing box not covered by the union. Result lies in [-1, 1].
/// Throws ZeroVolume when both boxes have zero volume.
double giou3d(const Aabb& a, const Aabb& b);

}  // namespace openable

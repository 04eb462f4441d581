#pragma once

#include "psphere/sphere_core.hpp"
#include "psphere/invariants.hpp"
#include "psphere/geometry.hpp"
#include "psphere/ring_metrics.hpp"
#include "psphere/base_metrics.hpp"
#include "psphere/mesh.hpp"
#include "psphere/glue.hpp"

#pragma once

/// Convenience umbrella for the whole library.

#include "handleplan/conditions.hpp"
#include "handleplan/json_io.hpp"
#include "handleplan/moves.hpp"
#include "handleplan/oracle.hpp"
#include "handleplan/planner.hpp"
#include "handleplan/surface.hpp"

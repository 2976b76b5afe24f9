#pragma once

#include "convexgeo/vec.hpp"
#include "convexgeo/rng.hpp"
#include "convexgeo/hull.hpp"
#include "convexgeo/mesh.hpp"
#include "convexgeo/chart.hpp"
#include "convexgeo/geodesic.hpp"
#include "convexgeo/approx.hpp"
#include "convexgeo/dc_checks.hpp"
#include "convexgeo/distance_fields.hpp"

#pragma once

#include "steinhaus/error.hpp"
#include "steinhaus/vector.hpp"
#include "steinhaus/hull.hpp"
#include "steinhaus/geometry.hpp"
#include "steinhaus/bodies.hpp"
#include "steinhaus/paths.hpp"
#include "steinhaus/interval1d.hpp"
#include "steinhaus/sumset_grid.hpp"
#include "steinhaus/io.hpp"
#include "steinhaus/svg.hpp"
#include "steinhaus/experiment.hpp"

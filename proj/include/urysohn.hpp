#pragma once

#include "urysohn/error.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/random.hpp"
#include "urysohn/metric_space.hpp"
#include "urysohn/isometry.hpp"
#include "urysohn/katetov.hpp"
#include "urysohn/theta.hpp"
#include "urysohn/graev.hpp"
#include "urysohn/homog.hpp"
#include "urysohn/gh.hpp"
#include "urysohn/relations.hpp"

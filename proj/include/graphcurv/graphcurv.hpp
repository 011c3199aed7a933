#pragma once

#include "graphcurv/errors.hpp"
#include "graphcurv/model_space.hpp"
#include "graphcurv/arc.hpp"
#include "graphcurv/graph.hpp"
#include "graphcurv/euler.hpp"
#include "graphcurv/quadrature.hpp"
#include "graphcurv/steiner.hpp"
#include "graphcurv/curvature.hpp"
#include "graphcurv/search.hpp"
#include "graphcurv/cone_density.hpp"
#include "graphcurv/model_cones.hpp"
#include "graphcurv/examples.hpp"

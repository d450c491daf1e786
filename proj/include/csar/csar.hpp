#pragma once

#include "csar/backprojection.hpp"
#include "csar/core_model.hpp"
#include "csar/design_calc.hpp"
#include "csar/errors.hpp"
#include "csar/metrics.hpp"
#include "csar/simulator.hpp"

#pragma once

#include <eulerpar/errors.hpp>
#include <eulerpar/euler/grid.hpp>
#include <eulerpar/euler/riemann.hpp>
#include <eulerpar/euler/sedov.hpp>
#include <eulerpar/euler/state.hpp>
#include <eulerpar/euler/sweep.hpp>

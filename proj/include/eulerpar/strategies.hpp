#pragma once

#include <eulerpar/strategies/decomposition.hpp>
#include <eulerpar/strategies/drivers.hpp>
#include <eulerpar/strategies/kernels.hpp>
#include <eulerpar/strategies/run.hpp>
#include <eulerpar/strategies/strategy_id.hpp>

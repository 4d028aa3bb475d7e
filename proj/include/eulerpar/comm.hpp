#pragma once

#include <eulerpar/comm/distribution.hpp>
#include <eulerpar/comm/shared_array.hpp>
#include <eulerpar/comm/spmd.hpp>

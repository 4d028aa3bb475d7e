#pragma once

#include <eulerpar/bench/harness.hpp>
#include <eulerpar/bench/plan.hpp>
#include <eulerpar/bench/report.hpp>

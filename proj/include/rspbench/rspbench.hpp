// rspbench.hpp
// Umbrella header.

#pragma once

#include "rspbench/benchmark.hpp"
#include "rspbench/ensemble.hpp"
#include "rspbench/errors.hpp"
#include "rspbench/io.hpp"
#include "rspbench/linalg.hpp"
#include "rspbench/partitions.hpp"
#include "rspbench/random.hpp"
#include "rspbench/simulate.hpp"
#include "rspbench/stats.hpp"
#include "rspbench/version.hpp"

#pragma once

#include "tmsq/gaussian/evolve.hpp"
#include "tmsq/gaussian/generator.hpp"
#include "tmsq/gaussian/metrics.hpp"
#include "tmsq/gaussian/state.hpp"
#include "tmsq/gaussian/steady.hpp"
#include "tmsq/gaussian/system.hpp"

#pragma once

#include "tmsq/fock/blocks.hpp"
#include "tmsq/fock/direct.hpp"
#include "tmsq/fock/integrate.hpp"
#include "tmsq/fock/liouvillian.hpp"
#include "tmsq/fock/moments.hpp"
#include "tmsq/fock/sectors.hpp"
#include "tmsq/fock/space.hpp"
#include "tmsq/fock/spin.hpp"
#include "tmsq/fock/state.hpp"
#include "tmsq/fock/truncation.hpp"

#pragma once

#include "neorl/geometry.hpp"
#include "neorl/random.hpp"
#include "neorl/waterworld.hpp"
#include "neorl/gvf_bank.hpp"
#include "neorl/behavior.hpp"
#include "neorl/agent.hpp"
#include "neorl/harness.hpp"
#include "neorl/config.hpp"
#include "neorl/selfcheck.hpp"

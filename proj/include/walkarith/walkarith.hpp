#pragma once

#include "arith.hpp"
#include "audit.hpp"
#include "common.hpp"
#include "correlations.hpp"
#include "densities.hpp"
#include "divprob.hpp"
#include "parallel.hpp"
#include "primestats.hpp"
#include "rng.hpp"
#include "pins.hpp"
#include "walkdist.hpp"

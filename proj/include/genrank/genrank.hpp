// Umbrella header.

#pragma once

#include "activation.hpp"
#include "combinatorics.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "matrix.hpp"
#include "network.hpp"
#include "numeric.hpp"
#include "rank.hpp"
#include "rank_laws.hpp"

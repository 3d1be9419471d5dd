// Umbrella header.
#pragma once

#include "anticonc/special_functions.hpp"
#include "anticonc/rootfind.hpp"
#include "anticonc/gauss_hermite.hpp"
#include "anticonc/marginals.hpp"
#include "anticonc/archimedean.hpp"
#include "anticonc/diagonals.hpp"
#include "anticonc/bounds.hpp"
#include "anticonc/montecarlo.hpp"
#include "anticonc/inference.hpp"
#include "anticonc/serde.hpp"

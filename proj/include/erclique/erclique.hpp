#pragma once

#include "erclique/cliques.hpp"
#include "erclique/combinatorics.hpp"
#include "erclique/expansion.hpp"
#include "erclique/fields.hpp"
#include "erclique/hypergraph.hpp"
#include "erclique/polynomial.hpp"
#include "erclique/random.hpp"
#include "erclique/reduction.hpp"

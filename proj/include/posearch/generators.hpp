#pragma once

#include <cstdint>

#include "posearch/poset.hpp"

namespace posearch {

// Standard families used by the CLI, benchmarks, and tests. Every family
// follows the dataset convention: element 1 is the top, element n the
// bottom.

Poset make_chain(int n);               // 1 > 2 > ... > n
Poset make_boolean(int k);             // subset lattice on k atoms, 2^k elements
Poset make_star(int k);                // top, k incomparable atoms, bottom
Poset make_grid(int rows, int cols);   // product of two chains

// Random order on n-2 middle elements (each admissible pair kept with the
// given probability), closed transitively, with a fresh top and bottom
// adjoined.
Poset make_random_poset(int n, double density, std::uint64_t seed);

}  // namespace posearch

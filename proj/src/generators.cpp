#include "posearch/generators.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "posearch/errors.hpp"
#include "posearch/rng.hpp"

namespace posearch {

Poset make_chain(int n) {
    if (n < 1) throw BadParams("chain length must be >= 1");
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (int i = 1; i < n; ++i) pairs.emplace_back(i, i + 1);
    return Poset::from_pairs(n, pairs);
}

Poset make_boolean(int k) {
    if (k < 0 || k > 20) throw BadParams("boolean lattice exponent must be in 0..20");
    const int n = 1 << k;
    // Subsets ranked by descending popcount, ties by ascending value, so the
    // full set gets index 1 and the empty set index n.
    std::vector<unsigned> subsets(n);
    for (int i = 0; i < n; ++i) subsets[i] = static_cast<unsigned>(i);
    std::stable_sort(subsets.begin(), subsets.end(), [](unsigned a, unsigned b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa > pb : a < b;
    });
    std::vector<int> id_of(n);
    for (int i = 0; i < n; ++i) id_of[subsets[i]] = i + 1;

    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (int s = 0; s < n; ++s)
        for (int b = 0; b < k; ++b)
            if (s & (1 << b)) pairs.emplace_back(id_of[s], id_of[s & ~(1 << b)]);
    return Poset::from_pairs(n, pairs);
}

Poset make_star(int k) {
    if (k < 1) throw BadParams("star needs at least one atom");
    std::vector<std::pair<ElementId, ElementId>> pairs;
    const int n = k + 2;
    for (int a = 2; a <= k + 1; ++a) {
        pairs.emplace_back(1, a);
        pairs.emplace_back(a, n);
    }
    return Poset::from_pairs(n, pairs);
}

Poset make_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw BadParams("grid sides must be >= 1");
    const int n = rows * cols;
    // Cell (i, j), 0-based, ordered coordinatewise; rank elements by
    // descending coordinate sum (ties by descending i) so the maximum cell
    // gets index 1.
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cells.emplace_back(i, j);
    std::stable_sort(cells.begin(), cells.end(), [](auto a, auto b) {
        int sa = a.first + a.second, sb = b.first + b.second;
        return sa != sb ? sa > sb : a.first > b.first;
    });
    auto id_of = [&](int i, int j) {
        for (int idx = 0; idx < n; ++idx)
            if (cells[idx] == std::pair<int, int>(i, j)) return idx + 1;
        return 0;
    };
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (auto [i, j] : cells) {
        if (i > 0) pairs.emplace_back(id_of(i, j), id_of(i - 1, j));
        if (j > 0) pairs.emplace_back(id_of(i, j), id_of(i, j - 1));
    }
    return Poset::from_pairs(n, pairs);
}

Poset make_random_poset(int n, double density, std::uint64_t seed) {
    if (n < 2) throw BadParams("random poset needs at least 2 elements");
    if (density < 0.0 || density > 1.0) throw BadParams("density must be in [0, 1]");
    std::mt19937_64 rng(mix_seed(seed, 0x9057));
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (int a = 2; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng_unit(rng) < density) pairs.emplace_back(a, b);
    for (int v = 2; v <= n; ++v) pairs.emplace_back(1, v);
    for (int v = 2; v < n; ++v) pairs.emplace_back(v, n);
    return Poset::from_pairs(n, pairs);
}

}  // namespace posearch

#pragma once

#include <cstddef>
#include <vector>

namespace relukit {

// A multiindex alpha in N_0^d, stored densely.
using Multiindex = std::vector<int>;

// |alpha| = sum of entries.
int mi_order(const Multiindex& a);

// Componentwise a <= b.
bool mi_leq(const Multiindex& a, const Multiindex& b);

// alpha! = prod alpha_i!
double mi_factorial(const Multiindex& a);

// binom(a, b) = prod binom(a_i, b_i); requires b <= a.
double mi_binomial(const Multiindex& a, const Multiindex& b);

// x^alpha.
double mi_pow(const std::vector<double>& x, const Multiindex& a);

// All multiindices in d variables with |alpha| <= n, graded lexicographic order.
std::vector<Multiindex> mi_enumerate(int d, int n);

// Multiindices b with b <= a, any order (used for binomial re-expansion).
std::vector<Multiindex> mi_below(const Multiindex& a);

}  // namespace relukit

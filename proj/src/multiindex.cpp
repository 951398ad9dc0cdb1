#include "relukit/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relukit {

int mi_order(const Multiindex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

bool mi_leq(const Multiindex& a, const Multiindex& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

double mi_factorial(const Multiindex& a) {
    double f = 1.0;
    for (int v : a)
        for (int k = 2; k <= v; ++k) f *= k;
    return f;
}

double mi_binomial(const Multiindex& a, const Multiindex& b) {
    if (!mi_leq(b, a)) throw std::invalid_argument("mi_binomial: b must be <= a");
    double r = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int n = a[i], k = b[i];
        double c = 1.0;
        for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
        r *= c;
    }
    return std::round(r);
}

double mi_pow(const std::vector<double>& x, const Multiindex& a) {
    if (x.size() != a.size()) throw std::invalid_argument("mi_pow: dimension mismatch");
    double r = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < a[i]; ++k) r *= x[i];
    return r;
}

namespace {

void enumerate_rec(int d, int pos, int remaining, Multiindex& cur,
                   std::vector<Multiindex>& out) {
    if (pos == d - 1) {
        cur[pos] = remaining;
        out.push_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        enumerate_rec(d, pos + 1, remaining - v, cur, out);
    }
}

}  // namespace

std::vector<Multiindex> mi_enumerate(int d, int n) {
    if (d < 1) throw std::invalid_argument("mi_enumerate: d must be positive");
    std::vector<Multiindex> out;
    Multiindex cur(d, 0);
    for (int total = 0; total <= n; ++total) enumerate_rec(d, 0, total, cur, out);
    return out;
}

std::vector<Multiindex> mi_below(const Multiindex& a) {
    std::vector<Multiindex> out;
    Multiindex cur(a.size(), 0);
    std::size_t d = a.size();
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < d && cur[i] == a[i]) {
            cur[i] = 0;
            ++i;
        }
        if (i == d) break;
        ++cur[i];
    }
    return out;
}

}  // namespace relukit

#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace bpi::oracle {

Masses law_masses(const Law &law, std::size_t cap) {
  Masses m(cap + 1);
  for (std::size_t k = 0; k <= cap; ++k) m[k] = pmf(law, k);
  return m;
}

Masses direct_convolve(const Masses &a, const Masses &b, std::size_t cap) {
  Masses out(cap + 1, 0.0);
  for (std::size_t i = 0; i < a.size() && i <= cap; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= cap; ++j) out[i + j] += a[i] * b[j];
  return out;
}

Masses convolution_power(const Masses &a, unsigned k, std::size_t cap) {
  Masses out(cap + 1, 0.0);
  out[0] = 1.0;
  for (unsigned i = 0; i < k; ++i) out = direct_convolve(out, a, cap);
  return out;
}

Masses generation_size(const Law &offspring, int n, std::size_t cap) {
  const Masses xi = law_masses(offspring, cap);
  Masses z(cap + 1, 0.0);
  z[1] = 1.0;  // cap >= 1
  for (int g = 0; g < n; ++g) {
    Masses next(cap + 1, 0.0);
    Masses power(cap + 1, 0.0);
    power[0] = 1.0;
    for (std::size_t k = 0; k <= cap; ++k) {
      for (std::size_t j = 0; j <= cap; ++j) next[j] += z[k] * power[j];
      power = direct_convolve(power, xi, cap);
    }
    z = std::move(next);
  }
  return z;
}

Masses dwass_total_progeny(const Law &offspring, std::size_t kmax) {
  const Masses xi = law_masses(offspring, kmax);
  Masses out(kmax + 1, 0.0);
  Masses power(kmax + 1, 0.0);
  power[0] = 1.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    power = direct_convolve(power, xi, kmax);
    out[k] = power[k - 1] / static_cast<double>(k);
  }
  return out;
}

Masses joint_dp_total_population(const Law &offspring, const Law &immigration, int n, std::size_t cap) {
  // S_m <= cap forces X_m <= cap, so dropping states with S_m > cap loses nothing below cap.
  const Masses xi = law_masses(offspring, cap);
  const Masses eta = law_masses(immigration, cap);
  std::vector<Masses> thinned(cap + 1);  // law of theta o x
  thinned[0] = Masses(cap + 1, 0.0);
  thinned[0][0] = 1.0;
  for (std::size_t x = 1; x <= cap; ++x) thinned[x] = direct_convolve(thinned[x - 1], xi, cap);

  std::map<std::pair<std::size_t, std::size_t>, double> state{{{0, 0}, 1.0}};
  for (int m = 1; m <= n; ++m) {
    std::map<std::pair<std::size_t, std::size_t>, double> next;
    for (const auto &[key, p] : state) {
      const auto [x, s] = key;
      const Masses step = direct_convolve(thinned[x], eta, cap);
      for (std::size_t y = 0; y + s <= cap; ++y)
        if (step[y] != 0.0) next[{y, s + y}] += p * step[y];
    }
    state = std::move(next);
  }
  Masses out(cap + 1, 0.0);
  for (const auto &[key, p] : state) out[key.second] += p;
  return out;
}

}  // namespace bpi::oracle

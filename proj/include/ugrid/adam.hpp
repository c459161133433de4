/// @file adam.hpp
/// @brief Adam with bias correction over a flat parameter vector.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ugrid {

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<double> m, v;

    explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

inline void adam_step(std::vector<double>& w, const std::vector<double>& g, AdamState& s, double lr) {
    if (w.size() != g.size()) throw std::invalid_argument("adam_step: size mismatch");
    if (s.m.size() != w.size()) {
        s.m.assign(w.size(), 0.0);
        s.v.assign(w.size(), 0.0);
        s.t = 0;
    }
    ++s.t;
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
    for (std::size_t k = 0; k < w.size(); ++k) {
        s.m[k] = s.beta1 * s.m[k] + (1.0 - s.beta1) * g[k];
        s.v[k] = s.beta2 * s.v[k] + (1.0 - s.beta2) * g[k] * g[k];
        const double mhat = s.m[k] / bc1;
        const double vhat = s.v[k] / bc2;
        w[k] -= lr * mhat / (std::sqrt(vhat) + s.eps);
    }
}

}  // namespace ugrid

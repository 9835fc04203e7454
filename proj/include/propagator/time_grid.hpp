#pragma once

#include <stdexcept>

namespace prop {

// Uniform partition of [0, T] into N steps with nodes t_i = i * T / N.
struct TimeGrid {
    double horizon;
    int n_steps;

    TimeGrid(double T, int N) : horizon(T), n_steps(N) {
        if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (N < 1) throw std::invalid_argument("TimeGrid: n_steps must be positive");
    }

    double step() const { return horizon / n_steps; }
    double node(int i) const { return i * horizon / n_steps; }
};

}  // namespace prop

#pragma once

#include <utility>

namespace swarmring {

/// One classical Runge-Kutta step.
///
/// rhs(state) returns a derivative; axpy(state, h, derivative) returns
/// state + h * derivative. Keeping axpy separate lets states with structure
/// (wrapped angles, several fields) define their own update.
template <class State, class Rhs, class Axpy>
State rk4_advance(const State& y, double dt, Rhs&& rhs, Axpy&& axpy) {
    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, dt / 2, k1));
    const auto k3 = rhs(axpy(y, dt / 2, k2));
    const auto k4 = rhs(axpy(y, dt, k3));
    State out = axpy(y, dt / 6, k1);
    out = axpy(out, dt / 3, k2);
    out = axpy(out, dt / 3, k3);
    return axpy(out, dt / 6, k4);
}

}  // namespace swarmring

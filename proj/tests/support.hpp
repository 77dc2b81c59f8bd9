#pragma once

#include <cmath>
#include <optional>

#include "blowup/errors.hpp"

// Code of the blowup::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<blowup::ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const blowup::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace kmexact {

// Error categories map 1:1 onto CLI exit codes (input -> 1, capacity -> 2,
// internal -> 3). Infeasibility is a value, not an exception.
enum class ErrorKind { input, capacity, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& msg) {
    throw Error(ErrorKind::input, msg);
}
[[noreturn]] inline void throw_capacity(const std::string& msg) {
    throw Error(ErrorKind::capacity, msg);
}
[[noreturn]] inline void throw_internal(const std::string& msg) {
    throw Error(ErrorKind::internal, msg);
}

// Costs are exact nonnegative 64-bit integers with an explicit infinity.
using Cost = std::int64_t;
inline constexpr Cost kInfCost = std::numeric_limits<Cost>::max();

inline bool is_finite(Cost c) { return c != kInfCost; }

// Saturates at infinity; finite overflow is an error, never a wraparound.
inline Cost checked_add(Cost a, Cost b) {
    if (a == kInfCost || b == kInfCost) return kInfCost;
    Cost out;
    if (__builtin_add_overflow(a, b, &out) || out < 0)
        throw_capacity("cost addition overflows 64 bits");
    return out;
}

inline Cost checked_mul(Cost a, Cost b) {
    if (a == kInfCost || b == kInfCost) return kInfCost;
    Cost out;
    if (__builtin_mul_overflow(a, b, &out) || out < 0)
        throw_capacity("cost multiplication overflows 64 bits");
    return out;
}

inline Cost checked_pow(Cost base, int exponent) {
    if (exponent < 1) throw_input("power exponent must be >= 1");
    Cost out = base;
    for (int i = 1; i < exponent; ++i) out = checked_mul(out, base);
    return out;
}

}  // namespace kmexact

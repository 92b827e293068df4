#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace acklab {

// Quotient plus the remainder carried forward to the next division.
struct CarryDiv {
    uint64_t quot = 0;
    uint64_t rem = 0;
};

// Quotient plus a pair of complementary remainders, one per direction of
// travel: rem[0] carries the residue of increases, rem[1] of decreases.
// After any call rem[0] + rem[1] == denom; the element not written by the
// call can therefore equal denom when the written one is 0. Callers must
// not normalize that state: the pending unit is released by the next
// division that crosses an integer boundary.
struct DualCarry {
    uint64_t quot = 0;
    std::array<uint64_t, 2> rem{0, 0};
};

// num + carry sums are checked rather than wrapped; desk-scale runs never
// get near 2^64 but a silent wrap would corrupt the carries invisibly.
inline uint64_t checked_add(uint64_t a, uint64_t b)
{
    uint64_t s = a + b;
    if (s < a)
        throw std::overflow_error("checked_add: uint64 overflow");
    return s;
}

inline CarryDiv div(uint64_t num, uint64_t denom)
{
    if (denom == 0)
        throw std::invalid_argument("div: denominator is zero");
    return CarryDiv{num / denom, num % denom};
}

// flip selects which remainder element this division writes; the other is
// kept in sync as its complement (rem[1] = denom - rem[0]).
inline DualCarry divu(uint64_t num, uint64_t denom, unsigned flip)
{
    if (denom == 0)
        throw std::invalid_argument("divu: denominator is zero");
    if (flip > 1)
        throw std::invalid_argument("divu: flip must be 0 or 1");
    DualCarry qr;
    qr.rem[flip] = num % denom;
    qr.rem[1 - flip] = denom - qr.rem[flip];
    qr.quot = num / denom;
    return qr;
}

} // namespace acklab

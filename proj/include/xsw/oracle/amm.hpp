#pragma once

// Independent reference math for the swap engine. Nothing here calls into
// xsw/amm.hpp: quotes come from the defining inequality of the pool, and the
// front-run bound comes from plain bisection.

#include "xsw/core/numeric.hpp"

namespace xsw::oracle {

struct PoolState {
    BigInt x;
    BigInt y;
    BigInt fee_num; // f = fee_num / fee_den in [0, 1)
    BigInt fee_den;
};

/// Does the pool accept paying `out` for `dx` in? (x + (1-f)dx)(y - out) >= x*y.
inline bool accepts(const PoolState& p, const BigInt& dx, const BigInt& out) {
    if (out > p.y) return false;
    // Scaled by fee_den to stay in integers.
    BigInt effective_in = p.x * p.fee_den + (p.fee_den - p.fee_num) * dx;
    return effective_in * (p.y - out) >= p.x * p.y * p.fee_den;
}

/// Largest acceptable output, exhaustively for small reserves.
inline BigInt quote_exhaustive(const PoolState& p, const BigInt& dx) {
    BigInt best = 0;
    for (BigInt out = 0; out <= p.y; ++out) {
        if (accepts(p, dx, out)) best = out;
    }
    return best;
}

/// Largest acceptable output by bisection on the acceptance inequality.
inline BigInt quote_bisect(const PoolState& p, const BigInt& dx) {
    BigInt lo = 0, hi = p.y; // accepts(lo)
    if (accepts(p, dx, hi)) return hi;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (accepts(p, dx, mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline PoolState after_swap(const PoolState& p, const BigInt& dx, BigInt* out_amount = nullptr) {
    BigInt out = quote_bisect(p, dx);
    if (out_amount) *out_amount = out;
    return PoolState{p.x + dx, p.y - out, p.fee_num, p.fee_den};
}

inline BigInt victim_out(const PoolState& p, const BigInt& front, const BigInt& victim_in) {
    PoolState s = front > 0 ? after_swap(p, front) : p;
    return quote_bisect(s, victim_in);
}

/// Largest front-run keeping the victim at or above `min_out`, by doubling then bisection.
inline BigInt frontrun_bisect(const PoolState& p, const BigInt& victim_in, const BigInt& min_out) {
    auto ok = [&](const BigInt& a) { return victim_out(p, a, victim_in) >= min_out; };
    if (!ok(0)) return 0;
    BigInt lo = 0, hi = 1;
    while (ok(hi)) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// ceil((1 - s) * quote) straight from the rational definition.
inline BigInt min_out(const BigInt& quote, const Rational& s) { return ceil_rational((1 - s) * Rational(quote)); }

} // namespace xsw::oracle

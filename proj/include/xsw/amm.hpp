#pragma once

// Constant-product swap math on exact integers.
//
// Every quote is computed as one rational expression and floored once, so the
// results match what an on-chain x*y=k pool pays out. Concentrated-liquidity
// pools are treated as constant product at their current in-range liquidity.

#include <string>
#include <string_view>

#include "xsw/core/bytes.hpp"
#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"

namespace xsw {

enum class Direction { XforY, YforX };

constexpr Direction opposite(Direction d) noexcept {
    return d == Direction::XforY ? Direction::YforX : Direction::XforY;
}

enum class Protocol { UniswapV2, UniswapV3, PancakeV2, PancakeV3, Other };

constexpr std::string_view to_string(Protocol p) noexcept {
    switch (p) {
    case Protocol::UniswapV2: return "uniswap_v2";
    case Protocol::UniswapV3: return "uniswap_v3";
    case Protocol::PancakeV2: return "pancake_v2";
    case Protocol::PancakeV3: return "pancake_v3";
    case Protocol::Other: return "other";
    }
    return "other";
}

inline Protocol protocol_from_string(std::string_view s) {
    if (s == "uniswap_v2") return Protocol::UniswapV2;
    if (s == "uniswap_v3") return Protocol::UniswapV3;
    if (s == "pancake_v2") return Protocol::PancakeV2;
    if (s == "pancake_v3") return Protocol::PancakeV3;
    if (s == "other") return Protocol::Other;
    throw Error(ErrorCode::Parse, "unknown protocol '" + std::string(s) + "'");
}

struct Pool {
    std::string token_x;
    std::string token_y;
    TokenAmount reserve_x;
    TokenAmount reserve_y;
    FeeRate fee;
    Address address;
    Protocol protocol = Protocol::UniswapV2;

    const TokenAmount& reserve_in(Direction d) const { return d == Direction::XforY ? reserve_x : reserve_y; }
    const TokenAmount& reserve_out(Direction d) const { return d == Direction::XforY ? reserve_y : reserve_x; }
    const std::string& token_in(Direction d) const { return d == Direction::XforY ? token_x : token_y; }
    const std::string& token_out(Direction d) const { return d == Direction::XforY ? token_y : token_x; }

    /// Same pool with the roles of X and Y exchanged.
    Pool mirrored() const {
        Pool m = *this;
        std::swap(m.token_x, m.token_y);
        std::swap(m.reserve_x, m.reserve_y);
        return m;
    }

    void validate() const {
        if (reserve_x == 0 || reserve_y == 0) throw Error(ErrorCode::InvalidArgument, "pool reserves must be positive");
    }

    BigInt product() const { return to_big(reserve_x) * to_big(reserve_y); }

    friend bool operator==(const Pool&, const Pool&) = default;
};

struct SwapRequest {
    Direction direction = Direction::XforY;
    TokenAmount amount_in;
    TokenAmount min_out;
    Address sender;
    Address recipient;
};

struct SwapOutcome {
    TokenAmount amount_in;
    TokenAmount amount_out;
    Pool pool_after;
    bool reverted = false;
};

namespace detail {

// floor(y * (1-f) * dx / (x + (1-f) * dx)) with (1-f) = kept/den.
inline BigInt cpmm_out(const BigInt& x, const BigInt& y, const FeeRate& fee, const BigInt& dx) {
    BigInt kept_in = BigInt(fee.kept()) * dx;
    return (y * kept_in) / (x * fee.den + kept_in);
}

} // namespace detail

/// Output of selling `amount_in` into the pool.
inline TokenAmount quote_output(const Pool& pool, Direction direction, const TokenAmount& amount_in) {
    if (amount_in == 0) throw Error(ErrorCode::ZeroInput, "swap input must be positive");
    pool.validate();
    BigInt x = to_big(pool.reserve_in(direction));
    BigInt dx = to_big(amount_in);
    if (x + dx > max_token_amount()) throw Error(ErrorCode::Overflow, "input reserve would exceed 256 bits");
    return to_amount(detail::cpmm_out(x, to_big(pool.reserve_out(direction)), pool.fee, dx));
}

/// Applies a swap without any minimum-output check. Returns (pool after, amount out).
inline std::pair<Pool, TokenAmount> apply_swap(const Pool& pool, Direction direction, const TokenAmount& amount_in) {
    TokenAmount out = quote_output(pool, direction, amount_in);
    Pool next = pool;
    if (direction == Direction::XforY) {
        next.reserve_x = to_amount(to_big(pool.reserve_x) + to_big(amount_in));
        next.reserve_y = to_amount(to_big(pool.reserve_y) - to_big(out));
    } else {
        next.reserve_y = to_amount(to_big(pool.reserve_y) + to_big(amount_in));
        next.reserve_x = to_amount(to_big(pool.reserve_x) - to_big(out));
    }
    return {std::move(next), out};
}

/// Executes `req` against `pool`; a quote below min_out reverts and leaves the pool untouched.
inline SwapOutcome execute_swap(const Pool& pool, const SwapRequest& req) {
    TokenAmount quote = quote_output(pool, req.direction, req.amount_in);
    if (quote < req.min_out) return SwapOutcome{req.amount_in, TokenAmount(0), pool, true};
    auto [next, out] = apply_swap(pool, req.direction, req.amount_in);
    return SwapOutcome{req.amount_in, out, std::move(next), false};
}

/// ceil((1 - s) * quote): the smallest output the revert check accepts.
inline TokenAmount min_out_from_tolerance(const TokenAmount& quote, const SlippageTolerance& s) {
    return to_amount(ceil_div(to_big(quote) * (s.den - s.num), BigInt(s.den)));
}

/// floor(s * victim_in), the first-order cap on what a sandwich can extract.
inline TokenAmount max_extractable(const TokenAmount& victim_in, const SlippageTolerance& s) {
    return to_amount(floor_div(to_big(victim_in) * s.num, BigInt(s.den)));
}

/// Victim output after a front-run of `front_in` in the victim's own direction.
inline TokenAmount victim_output_after_frontrun(const Pool& pool, Direction direction, const TokenAmount& front_in,
                                                const TokenAmount& victim_in) {
    BigInt x = to_big(pool.reserve_in(direction));
    BigInt y = to_big(pool.reserve_out(direction));
    BigInt a = to_big(front_in);
    if (a > 0) {
        BigInt front_out = detail::cpmm_out(x, y, pool.fee, a);
        x += a;
        y -= front_out;
    }
    return to_amount(detail::cpmm_out(x, y, pool.fee, to_big(victim_in)));
}

namespace detail {

// Positive root of the real-valued front-run condition, floored; 0 when there is none.
// With g = kept/D the condition y0*x0*g*v = T*(x0 + g*a)*(x0 + a + g*v) multiplies out to
// A a^2 + B a + C = 0 with the coefficients below (scaled by D^2).
inline BigInt frontrun_root_estimate(const BigInt& x0, const BigInt& y0, const FeeRate& fee, const BigInt& v,
                                     const BigInt& target) {
    const BigInt g(fee.kept());
    const BigInt d(fee.den);
    BigInt dx0 = d * x0;
    BigInt a2 = target * g * d;
    BigInt b = target * (g * (dx0 + g * v) + d * dx0);
    BigInt c = target * dx0 * (dx0 + g * v) - dx0 * y0 * g * v;
    if (c >= 0) return 0;
    BigInt disc = b * b - 4 * a2 * c;
    BigInt root = mp::sqrt(disc);
    BigInt num = root - b;
    if (num <= 0) return 0;
    return num / (2 * a2);
}

} // namespace detail

/// Largest front-run a >= 0 after which the victim still receives at least `min_out`.
/// Returns 0 when no positive front-run leaves the victim executable (NoRoom).
inline TokenAmount max_frontrun_for_min_out(const Pool& pool, Direction direction, const TokenAmount& victim_in,
                                            const TokenAmount& min_out) {
    pool.validate();
    if (victim_in == 0) throw Error(ErrorCode::ZeroInput, "victim input must be positive");
    if (min_out == 0) throw Error(ErrorCode::InvalidArgument, "min_out must be positive to bound the front-run");

    const BigInt x0 = to_big(pool.reserve_in(direction));
    const BigInt y0 = to_big(pool.reserve_out(direction));
    const BigInt v = to_big(victim_in);
    const BigInt target = to_big(min_out);
    const BigInt cap = max_token_amount() - x0 - v;
    if (cap < 0) throw Error(ErrorCode::Overflow, "victim input would push reserves past 256 bits");

    auto executes = [&](const BigInt& a) {
        BigInt x = x0, y = y0;
        if (a > 0) {
            BigInt out = detail::cpmm_out(x, y, pool.fee, a);
            x += a;
            y -= out;
        }
        return detail::cpmm_out(x, y, pool.fee, v) >= target;
    };

    if (!executes(0)) return TokenAmount(0);

    BigInt estimate = detail::frontrun_root_estimate(x0, y0, pool.fee, v, target);
    if (estimate > cap) estimate = cap;

    // Gallop from the analytic estimate: unit steps first, doubling until the
    // predicate flips, then bisect the bracket. Near-exact estimates cost a couple of probes.
    BigInt lo, hi;
    if (executes(estimate)) {
        lo = estimate;
        BigInt step = 1;
        for (;;) {
            BigInt probe = lo + step;
            if (probe > cap) {
                if (executes(cap)) return to_amount(cap);
                hi = cap;
                break;
            }
            if (!executes(probe)) {
                hi = probe;
                break;
            }
            lo = probe;
            step <<= 1;
        }
    } else {
        hi = estimate;
        BigInt step = 1;
        for (;;) {
            BigInt probe = hi - step;
            if (probe <= 0) {
                lo = 0;
                break;
            }
            if (executes(probe)) {
                lo = probe;
                break;
            }
            hi = probe;
            step <<= 1;
        }
    }
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (executes(mid))
            lo = mid;
        else
            hi = mid;
    }
    return to_amount(lo);
}

/// Profit-maximizing front-run for an X-for-Y victim: the largest input that still
/// lets the victim clear ceil((1 - s_v * theta) * quote). theta = 1 spends the whole buffer.
inline TokenAmount optimal_frontrun_input(const Pool& pool, const TokenAmount& victim_in, const SlippageTolerance& s_v,
                                          const ExtractionFraction& theta, Direction direction = Direction::XforY) {
    TokenAmount quote = quote_output(pool, direction, victim_in);
    if (quote == 0) throw Error(ErrorCode::InvalidArgument, "victim's unattacked quote is zero");
    TokenAmount target = min_out_from_tolerance(quote, effective_tolerance(s_v, theta));
    return max_frontrun_for_min_out(pool, direction, victim_in, target);
}

/// Output target that leaves (1 - theta) of the buffer between `quote` and `min_return`
/// to the victim. Used when only the frozen minimum is observable, not s itself.
inline TokenAmount buffer_target(const TokenAmount& quote, const TokenAmount& min_return,
                                 const ExtractionFraction& theta) {
    if (quote <= min_return) return min_return;
    BigInt buffer = to_big(quote) - to_big(min_return);
    BigInt taken = floor_div(buffer * theta.num, BigInt(theta.den));
    return to_amount(to_big(quote) - taken);
}

/// Output of selling the front-run's Y back into the post-victim pool.
inline TokenAmount backrun_output(const Pool& pool_after_victim, const TokenAmount& frontrun_out,
                                  Direction victim_direction = Direction::XforY) {
    if (frontrun_out == 0) return TokenAmount(0);
    return quote_output(pool_after_victim, opposite(victim_direction), frontrun_out);
}

/// Hypothetical three-swap sandwich. Amounts are in the victim's input token
/// (X for an X-for-Y victim) except frontrun_out and victim_out.
struct SandwichPlan {
    TokenAmount frontrun_in;
    TokenAmount frontrun_out;
    TokenAmount victim_quote;
    TokenAmount victim_min_out;
    TokenAmount expected_victim_out;
    TokenAmount backrun_out;
    TokenAmount gas_cost;
    BigInt profit;
    bool no_room = false;
    bool victim_reverted = false;
};

/// Replays front-run `frontrun_in`, the victim (with its min_out) and the back-run of the
/// front-run's full output on a copy of `pool`.
inline SandwichPlan replay_sandwich(const Pool& pool, Direction direction, const TokenAmount& frontrun_in,
                                    const TokenAmount& victim_in, const TokenAmount& victim_min_out,
                                    const TokenAmount& gas_cost) {
    SandwichPlan plan;
    plan.gas_cost = gas_cost;
    plan.victim_quote = quote_output(pool, direction, victim_in);
    plan.victim_min_out = victim_min_out;
    plan.frontrun_in = frontrun_in;
    Pool state = pool;
    if (frontrun_in > 0) {
        auto [after_front, out] = apply_swap(state, direction, frontrun_in);
        state = std::move(after_front);
        plan.frontrun_out = out;
    }
    SwapOutcome victim = execute_swap(state, SwapRequest{direction, victim_in, victim_min_out, {}, {}});
    plan.victim_reverted = victim.reverted;
    plan.expected_victim_out = victim.amount_out;
    state = victim.pool_after;
    plan.backrun_out = backrun_output(state, plan.frontrun_out, direction);
    plan.profit = to_big(plan.backrun_out) - to_big(plan.frontrun_in) - to_big(gas_cost);
    plan.no_room = frontrun_in == 0;
    return plan;
}

/// Optimal sandwich against a victim that must receive at least `target` (the front-run
/// bound) and reverts below `victim_min_out`.
inline SandwichPlan plan_against_target(const Pool& pool, Direction direction, const TokenAmount& victim_in,
                                        const TokenAmount& target, const TokenAmount& victim_min_out,
                                        const TokenAmount& gas_cost) {
    TokenAmount front = max_frontrun_for_min_out(pool, direction, victim_in, target);
    return replay_sandwich(pool, direction, front, victim_in, victim_min_out, gas_cost);
}

/// Full plan for `victim` with tolerance s_v; the victim's own minimum is
/// min_out_from_tolerance(quote, s_v) and the front-run spends theta of the buffer.
/// Y-for-X victims are planned on the mirrored pool, which gives identical amounts.
inline SandwichPlan plan_sandwich(const Pool& pool, const SwapRequest& victim, const SlippageTolerance& s_v,
                                  const ExtractionFraction& theta, const TokenAmount& gas_cost) {
    if (victim.direction == Direction::YforX) {
        SwapRequest mirrored = victim;
        mirrored.direction = Direction::XforY;
        return plan_sandwich(pool.mirrored(), mirrored, s_v, theta, gas_cost);
    }
    TokenAmount quote = quote_output(pool, Direction::XforY, victim.amount_in);
    TokenAmount min_out = min_out_from_tolerance(quote, s_v);
    TokenAmount target = min_out_from_tolerance(quote, effective_tolerance(s_v, theta));
    if (quote == 0 || target == 0) {
        return replay_sandwich(pool, Direction::XforY, TokenAmount(0), victim.amount_in, min_out, gas_cost);
    }
    return plan_against_target(pool, Direction::XforY, victim.amount_in, target, min_out, gas_cost);
}

} // namespace xsw

#pragma once

// Event topics and function selectors the ingest path recognises.

#include <string>
#include <string_view>
#include <vector>

#include "xsw/core/bytes.hpp"

namespace xsw::io {

enum class LogLayout {
    V2Swap,        // uint256 amount0In, amount1In, amount0Out, amount1Out
    V3Swap,        // int256 amount0, amount1; uint160 sqrtPriceX96; uint128 liquidity; int24 tick
    PancakeV3Swap, // V3Swap plus uint128 protocolFeesToken0, protocolFeesToken1
    OracleRequest, // bridge intent, see docs/formats.md
};

constexpr std::size_t data_words(LogLayout l) noexcept {
    switch (l) {
    case LogLayout::V2Swap: return 4;
    case LogLayout::V3Swap: return 5;
    case LogLayout::PancakeV3Swap: return 7;
    case LogLayout::OracleRequest: return 0; // variable
    }
    return 0;
}

struct EventEntry {
    std::string protocol;
    std::string event;
    Hash32 topic;
    LogLayout layout;
};

struct FunctionEntry {
    std::string protocol;
    std::string function;
    Selector selector;
};

class SignatureRegistry {
public:
    static const SignatureRegistry& builtin() {
        static const SignatureRegistry r = make_builtin();
        return r;
    }

    const std::vector<EventEntry>& events() const { return events_; }
    const std::vector<FunctionEntry>& functions() const { return functions_; }

    /// All rows sharing `topic`; V2 forks share one hash, and they share a layout too.
    std::vector<const EventEntry*> find_event(const Hash32& topic) const {
        std::vector<const EventEntry*> out;
        for (const auto& e : events_)
            if (e.topic == topic) out.push_back(&e);
        return out;
    }

    const FunctionEntry* find_function(const Selector& s) const {
        for (const auto& f : functions_)
            if (f.selector == s) return &f;
        return nullptr;
    }

    const FunctionEntry* find_function(std::string_view protocol, std::string_view name) const {
        for (const auto& f : functions_)
            if (f.protocol == protocol && f.function == name) return &f;
        return nullptr;
    }

    const EventEntry* find_event(std::string_view protocol, std::string_view name) const {
        for (const auto& e : events_)
            if (e.protocol == protocol && e.event == name) return &e;
        return nullptr;
    }

    void add(EventEntry e) { events_.push_back(std::move(e)); }
    void add(FunctionEntry f) { functions_.push_back(std::move(f)); }

private:
    static SignatureRegistry make_builtin() {
        SignatureRegistry r;
        const auto topic = [](const char* hex) { return Hash32::from_hex(hex); };
        r.add(EventEntry{"Uniswap V2", "Swap", topic("0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822"), LogLayout::V2Swap});
        r.add(EventEntry{"PancakeSwap V2", "Swap", topic("0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822"), LogLayout::V2Swap});
        r.add(EventEntry{"Uniswap V3", "Swap", topic("0xc42079f94a6350d7e6235f29174924f928cc2ac818eb64fed8004e115fbcca67"), LogLayout::V3Swap});
        r.add(EventEntry{"PancakeSwap V3", "Swap", topic("0x19b47279256b2a23a1665c810c8d55a1758940ee09377d4f8d26497a3577dc83"), LogLayout::PancakeV3Swap});
        r.add(EventEntry{"Symbiosis", "OracleRequest", topic("0x532dbb6d061eee97ab4370060f60ede10b3dc361cc1214c07ae5e34dd86e6aaf"), LogLayout::OracleRequest});

        const auto sel = [](const char* hex) { return Selector::from_hex(hex); };
        r.add(FunctionEntry{"Symbiosis", "metaMintSyntheticToken", sel("0xc29a91bc")});
        r.add(FunctionEntry{"Symbiosis", "metaBurnSyntheticToken", sel("0xe66bb550")});
        r.add(FunctionEntry{"Symbiosis", "receiveRequestV2Signed", sel("0x84d61c97")});
        r.add(FunctionEntry{"Symbiosis", "metaUnsynthesize", sel("0xc23a4c88")});
        r.add(FunctionEntry{"Symbiosis", "externalCall", sel("0xf5b697a5")});
        r.add(FunctionEntry{"1inch", "swap", sel("0x12aa3caf")});
        r.add(FunctionEntry{"1inch", "uniswapV3SwapTo", sel("0xbc80f1a8")});
        r.add(FunctionEntry{"OpenOcean", "swap", sel("0x90411a32")});
        r.add(FunctionEntry{"Uniswap V2", "swapExactTokensForTokens", sel("0x38ed1739")});
        r.add(FunctionEntry{"Uniswap V2", "swapExactTokensForETH", sel("0x18cbafe5")});
        return r;
    }

    std::vector<EventEntry> events_;
    std::vector<FunctionEntry> functions_;
};

} // namespace xsw::io

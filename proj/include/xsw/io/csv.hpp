#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"
#include "xsw/detector.hpp"
#include "xsw/report.hpp"

namespace xsw::io {

namespace csv {

inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += quote(fields[i]);
    }
    return out + "\n";
}

/// RFC 4180 fields of one line; embedded newlines are not supported.
inline std::vector<std::string> split(const std::string& line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": unterminated quote");
    out.push_back(std::move(cur));
    return out;
}

inline std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::string usd(const std::optional<Rational>& v) { return v ? format_decimal(*v, 2) : std::string(); }

} // namespace csv

/// Columns: token_id, symbol, usd_price, optional decimals (default 18). A header row
/// naming these columns is required; '#' lines are comments.
inline PriceTable parse_price_table(const std::string& text, const std::string& source) {
    PriceTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    int c_id = -1, c_sym = -1, c_price = -1, c_dec = -1;
    bool header = false;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = csv::trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto f = csv::split(line, n);
        for (auto& x : f) x = csv::trim(x);
        if (!header) {
            for (int i = 0; i < static_cast<int>(f.size()); ++i) {
                if (f[i] == "token_id") c_id = i;
                else if (f[i] == "symbol") c_sym = i;
                else if (f[i] == "usd_price") c_price = i;
                else if (f[i] == "decimals") c_dec = i;
                else throw Error(ErrorCode::Parse, source + ":" + std::to_string(n) + ": unknown column '" + f[i] + "'");
            }
            if (c_id < 0 || c_price < 0) throw Error(ErrorCode::Parse, source + ": header needs token_id and usd_price");
            header = true;
            continue;
        }
        auto at = [&](int c) -> std::string { return c >= 0 && c < static_cast<int>(f.size()) ? f[c] : std::string(); };
        std::string where = source + ":" + std::to_string(n);
        std::string id = at(c_id);
        if (id.empty()) throw Error(ErrorCode::Parse, where + ": token_id: empty");
        TokenPrice p;
        p.symbol = at(c_sym).empty() ? id : at(c_sym);
        try {
            p.usd_price = parse_rational(at(c_price));
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, where + ": usd_price: " + e.message());
        }
        if (!at(c_dec).empty()) {
            try {
                TokenAmount d = parse_amount(at(c_dec));
                if (d > 77) throw Error(ErrorCode::Parse, "above 77");
                p.decimals = d.convert_to<unsigned>();
            } catch (const Error& e) {
                throw Error(ErrorCode::Parse, where + ": decimals: " + e.message());
            }
        }
        try {
            table.set(id, std::move(p));
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, where + ": " + e.message());
        }
    }
    if (!header) throw Error(ErrorCode::Parse, source + ": missing header row");
    return table;
}

// ---- Report tables ----------------------------------------------------------

inline std::string chain_pairs_csv(const Report& r) {
    std::string out = csv::row({"source_chain", "destination_chain", "pairs", "profit_usd", "volume_usd", "profit_share_of_volume", "unpriced_pairs"});
    for (const auto& c : r.chain_pairs) {
        std::string share;
        if (c.volume_usd && *c.volume_usd > 0) share = format_percent(c.profit_usd / *c.volume_usd, 4);
        out += csv::row({std::to_string(c.source), std::to_string(c.destination), std::to_string(c.pairs), format_decimal(c.profit_usd, 2),
                         csv::usd(c.volume_usd), share, std::to_string(c.unpriced_pairs)});
    }
    return out;
}

inline std::string pools_csv(const Report& r) {
    std::string out = csv::row({"chain_id", "pool", "attacks"});
    for (const auto& p : r.pools) out += csv::row({std::to_string(p.chain), p.pool.hex(), std::to_string(p.attacks)});
    return out;
}

inline std::string positions_csv(const Report& r) {
    std::string out = csv::row({"bin_low", "bin_high", "front_all", "front_profitable", "back_all", "back_profitable"});
    for (std::size_t i = 0; i < kPositionBins; ++i) {
        out += csv::row({format_decimal(Rational(BigInt(i), BigInt(kPositionBins)), 1), format_decimal(Rational(BigInt(i + 1), BigInt(kPositionBins)), 1),
                         std::to_string(r.front_position_all[i]), std::to_string(r.front_position_profitable[i]),
                         std::to_string(r.back_position_all[i]), std::to_string(r.back_position_profitable[i])});
    }
    return out;
}

inline std::string gas_csv(const Report& r) {
    static const char* labels[] = {"delta_lt_0", "delta_0_to_1_gwei", "delta_1_to_10_gwei", "delta_ge_10_gwei"};
    std::string out = csv::row({"metric", "count", "share"});
    auto share = [&](std::size_t n) { return r.gas.pairs ? format_percent(Rational(BigInt(n), BigInt(r.gas.pairs)), 2) : std::string(); };
    out += csv::row({"pairs", std::to_string(r.gas.pairs), ""});
    out += csv::row({"front_gas_below_victim", std::to_string(r.gas.front_below_victim), share(r.gas.front_below_victim)});
    out += csv::row({"zero_gas_front", std::to_string(r.gas.zero_gas_front), share(r.gas.zero_gas_front)});
    for (std::size_t i = 0; i < 4; ++i) out += csv::row({labels[i], std::to_string(r.gas.back_delta[i]), share(r.gas.back_delta[i])});
    return out;
}

inline std::string summary_csv(const Report& r) {
    std::string out = csv::row({"class", "pairs", "profit_usd", "unpriced_pairs"});
    out += csv::row({"cross_chain", std::to_string(r.cross_chain.pairs), format_decimal(r.cross_chain.profit_usd, 2), std::to_string(r.cross_chain.unpriced_pairs)});
    out += csv::row({"single_chain", std::to_string(r.single_chain.pairs), format_decimal(r.single_chain.profit_usd, 2), std::to_string(r.single_chain.unpriced_pairs)});
    return out;
}

} // namespace xsw::io

#include "rectsim/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace rectsim {

namespace {

int suffix_exponent(std::string_view s)
{
    // Returns the decimal exponent of the suffix, or INT_MIN-like sentinel.
    if (s.empty()) return 0;
    std::string low;
    low.reserve(s.size());
    for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "meg") return 6;
    if (low.size() != 1) return -1000;
    switch (low[0]) {
        case 'f': return -15;
        case 'p': return -12;
        case 'n': return -9;
        case 'u': return -6;
        case 'm': return -3;
        case 'k': return 3;
        case 'g': return 9;
        default: return -1000;
    }
}

} // namespace

std::optional<double> parse_spice_number(std::string_view token)
{
    if (token.empty()) return std::nullopt;
    std::string_view body = token;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
        if (body.empty()) return std::nullopt;
    }
    if (body.front() == '+' || body.front() == '-') return std::nullopt;

    double magnitude = 0.0;
    const char* first = body.data();
    const char* last = body.data() + body.size();
    auto [ptr, ec] = std::from_chars(first, last, magnitude);
    if (ec != std::errc{} || ptr == first) return std::nullopt;

    std::string_view rest(ptr, static_cast<size_t>(last - ptr));
    if (rest.empty()) return negative ? -magnitude : magnitude;

    int exp = suffix_exponent(rest);
    if (exp == -1000) return std::nullopt;

    // Splice the decimal exponent into the literal and convert once, so a
    // suffixed number equals the equivalent e-notation literal bit for bit.
    std::string_view mantissa(first, static_cast<size_t>(ptr - first));
    if (mantissa.find('e') == std::string_view::npos &&
        mantissa.find('E') == std::string_view::npos) {
        char buf[64];
        int n = std::snprintf(buf, sizeof buf, "%.*se%d",
                              static_cast<int>(mantissa.size()), mantissa.data(), exp);
        double spliced = 0.0;
        auto [p2, ec2] = std::from_chars(buf, buf + n, spliced);
        if (ec2 == std::errc{} && p2 == buf + n)
            return negative ? -spliced : spliced;
    }
    magnitude *= std::pow(10.0, exp);
    return negative ? -magnitude : magnitude;
}

std::string format_number(double value)
{
    if (value == 0.0) return "0";
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";

    // Shortest round-trip digits in scientific form, re-rendered.
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    (void)ec;
    std::string sci(buf, end);

    bool neg = false;
    size_t pos = 0;
    if (sci[pos] == '-') { neg = true; ++pos; }
    std::string digits;
    size_t epos = sci.find('e', pos);
    for (size_t i = pos; i < epos; ++i)
        if (sci[i] != '.') digits.push_back(sci[i]);
    int exp10 = std::atoi(sci.c_str() + epos + 1);
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out;
    if (exp10 >= -4 && exp10 <= 15) {
        if (exp10 >= static_cast<int>(digits.size()) - 1) {
            out = digits;
            out.append(static_cast<size_t>(exp10) - digits.size() + 1, '0');
        } else if (exp10 >= 0) {
            out = digits.substr(0, static_cast<size_t>(exp10) + 1);
            out.push_back('.');
            out += digits.substr(static_cast<size_t>(exp10) + 1);
        } else {
            out = "0.";
            out.append(static_cast<size_t>(-exp10) - 1, '0');
            out += digits;
        }
    } else {
        out = digits.substr(0, 1);
        if (digits.size() > 1) {
            out.push_back('.');
            out += digits.substr(1);
        }
        out.push_back('e');
        out += (exp10 < 0) ? "-" : "+";
        int ae = std::abs(exp10);
        if (ae < 10) out.push_back('0');
        out += std::to_string(ae);
    }
    return neg ? "-" + out : out;
}

std::string format_csv(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", value);
    return buf;
}

} // namespace rectsim

#include "marketcast/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace marketcast {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

}  // namespace

bool Date::is_valid() const {
    if (month < 1 || month > 12) return false;
    if (day < 1 || day > days_in_month(year, month)) return false;
    return true;
}

// Howard Hinnant's civil-days algorithm.
std::int64_t Date::serial() const {
    const int y = year - (month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date Date::from_serial(std::int64_t days) {
    const std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m), static_cast<int>(d)};
}

int Date::weekday() const {
    const std::int64_t s = serial();
    // 1970-01-01 was a Thursday (4).
    std::int64_t w = (s % 7 + 7) % 7;  // 0 = Thursday
    return static_cast<int>((w + 3) % 7) + 1;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("date not in YYYY-MM-DD format: '" + text + "'");
    }
    auto parse_int = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, value);
        if (ec != std::errc{} || ptr != first + len) {
            throw std::invalid_argument("date not in YYYY-MM-DD format: '" + text + "'");
        }
        return value;
    };
    Date d{parse_int(0, 4), parse_int(5, 2), parse_int(8, 2)};
    if (!d.is_valid()) {
        throw std::invalid_argument("impossible calendar date: '" + text + "'");
    }
    return d;
}

Date next_day(const Date& d) { return Date::from_serial(d.serial() + 1); }

}  // namespace marketcast

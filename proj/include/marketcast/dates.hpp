#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace marketcast {

/**
 * @brief Calendar date (proleptic Gregorian), day resolution.
 *
 * Stored as year/month/day with strong ordering. Conversion to and from a
 * serial day number is provided for calendar arithmetic.
 */
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// True when (year, month, day) names a real Gregorian calendar day.
    [[nodiscard]] bool is_valid() const;

    /// Days since 1970-01-01 (negative for earlier dates).
    [[nodiscard]] std::int64_t serial() const;

    /// Inverse of serial().
    static Date from_serial(std::int64_t days);

    /// Monday = 1 ... Sunday = 7.
    [[nodiscard]] int weekday() const;

    [[nodiscard]] bool is_weekend() const { return weekday() >= 6; }

    /// Formats as ISO "YYYY-MM-DD".
    [[nodiscard]] std::string to_string() const;

    /**
     * @brief Parses an ISO "YYYY-MM-DD" string.
     * @throws std::invalid_argument on malformed text or impossible dates.
     */
    static Date parse(const std::string& text);
};

/// Next calendar day.
Date next_day(const Date& d);

}  // namespace marketcast

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chstory {

enum class DatePrecision { day, month, year };

std::string_view to_string(DatePrecision p) noexcept;
std::optional<DatePrecision> parse_precision(std::string_view text) noexcept;

/// Days since 1970-01-01 in the proleptic Gregorian calendar.
using DayNumber = std::int64_t;

/// A possibly imprecise calendar date ("1520", "1520-08", "1520-08-02").
///
/// Comparisons between dates of different precision happen at day resolution
/// after expanding the imprecise part: a start endpoint expands to the first
/// contained day, an end endpoint to the last.
class CalendarDate {
public:
    CalendarDate() = default;

    /// Throws Error{MalformedDocument} when the value does not match the
    /// precision or names an impossible date. Years are four digits.
    static CalendarDate parse(std::string_view value, DatePrecision precision);
    /// Precision taken from the number of components in `value`.
    static CalendarDate parse(std::string_view value);

    static CalendarDate from_ymd(int year, unsigned month, unsigned day);
    static CalendarDate from_year(int year);

    int year() const noexcept { return year_; }
    unsigned month() const noexcept { return month_; }
    unsigned day() const noexcept { return day_; }
    DatePrecision precision() const noexcept { return precision_; }

    DayNumber earliest_day() const;
    DayNumber latest_day() const;

    std::string value() const;

    bool operator==(const CalendarDate&) const = default;

private:
    int year_ = 1970;
    unsigned month_ = 1;
    unsigned day_ = 1;
    DatePrecision precision_ = DatePrecision::day;
};

/// A closed interval of days. An absent end means the span covers exactly the
/// days contained in `start`.
struct TimeSpan {
    CalendarDate start;
    std::optional<CalendarDate> end;

    DayNumber first_day() const { return start.earliest_day(); }
    DayNumber last_day() const { return end ? end->latest_day() : start.latest_day(); }

    bool well_ordered() const { return first_day() <= last_day(); }
    bool overlaps(const TimeSpan& other) const {
        return first_day() <= other.last_day() && other.first_day() <= last_day();
    }

    bool operator==(const TimeSpan&) const = default;
};

} // namespace chstory

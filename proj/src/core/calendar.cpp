#include "chstory/calendar.hpp"

#include "chstory/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace chstory {

namespace {

namespace chr = std::chrono;

bool parse_fixed(std::string_view text, std::size_t digits, unsigned& out) {
    if (text.size() != digits) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{};
}

[[noreturn]] void bad_date(std::string_view value, std::string_view why) {
    throw Error(ErrorCode::MalformedDocument,
                "invalid date '" + std::string(value) + "': " + std::string(why));
}

} // namespace

std::string_view to_string(DatePrecision p) noexcept {
    switch (p) {
    case DatePrecision::day: return "day";
    case DatePrecision::month: return "month";
    case DatePrecision::year: return "year";
    }
    return "day";
}

std::optional<DatePrecision> parse_precision(std::string_view text) noexcept {
    if (text == "day") return DatePrecision::day;
    if (text == "month") return DatePrecision::month;
    if (text == "year") return DatePrecision::year;
    return std::nullopt;
}

CalendarDate CalendarDate::parse(std::string_view value, DatePrecision precision) {
    CalendarDate d = parse(value);
    if (d.precision_ != precision)
        bad_date(value, "value form does not match precision '" + std::string(to_string(precision)) + "'");
    return d;
}

CalendarDate CalendarDate::parse(std::string_view value) {
    CalendarDate d;
    unsigned y = 0, m = 1, dd = 1;
    if (value.size() < 4 || !parse_fixed(value.substr(0, 4), 4, y)) bad_date(value, "expected YYYY[-MM[-DD]]");
    if (y == 0) bad_date(value, "year 0000 is not supported");
    auto rest = value.substr(4);
    DatePrecision precision = DatePrecision::year;
    if (!rest.empty()) {
        if (rest.size() < 3 || rest[0] != '-' || !parse_fixed(rest.substr(1, 2), 2, m))
            bad_date(value, "expected YYYY[-MM[-DD]]");
        precision = DatePrecision::month;
        rest = rest.substr(3);
        if (!rest.empty()) {
            if (rest.size() != 3 || rest[0] != '-' || !parse_fixed(rest.substr(1, 2), 2, dd))
                bad_date(value, "expected YYYY[-MM[-DD]]");
            precision = DatePrecision::day;
        }
    }
    if (m < 1 || m > 12) bad_date(value, "month out of range");
    chr::year_month_day ymd{chr::year{static_cast<int>(y)}, chr::month{m}, chr::day{dd}};
    if (!ymd.ok()) bad_date(value, "day out of range");
    d.year_ = static_cast<int>(y);
    d.month_ = m;
    d.day_ = dd;
    d.precision_ = precision;
    return d;
}

CalendarDate CalendarDate::from_ymd(int year, unsigned month, unsigned day) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    return parse(buf);
}

CalendarDate CalendarDate::from_year(int year) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04d", year);
    return parse(buf);
}

DayNumber CalendarDate::earliest_day() const {
    chr::year y{year_};
    switch (precision_) {
    case DatePrecision::year: return chr::sys_days{y / chr::January / 1}.time_since_epoch().count();
    case DatePrecision::month: return chr::sys_days{y / chr::month{month_} / 1}.time_since_epoch().count();
    case DatePrecision::day: break;
    }
    return chr::sys_days{y / chr::month{month_} / chr::day{day_}}.time_since_epoch().count();
}

DayNumber CalendarDate::latest_day() const {
    chr::year y{year_};
    switch (precision_) {
    case DatePrecision::year: return chr::sys_days{y / chr::December / 31}.time_since_epoch().count();
    case DatePrecision::month:
        return chr::sys_days{chr::year_month_day_last{y, chr::month_day_last{chr::month{month_}}}}
            .time_since_epoch()
            .count();
    case DatePrecision::day: break;
    }
    return earliest_day();
}

std::string CalendarDate::value() const {
    char buf[16];
    switch (precision_) {
    case DatePrecision::year: std::snprintf(buf, sizeof buf, "%04d", year_); break;
    case DatePrecision::month: std::snprintf(buf, sizeof buf, "%04d-%02u", year_, month_); break;
    case DatePrecision::day: std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_); break;
    }
    return buf;
}

} // namespace chstory

#include "leaders/corpus/tweet.hpp"

#include <charconv>

#include <fmt/format.h>

namespace leaders::corpus {

std::string CleanTweet::clean_text() const {
    return fmt::format("{}", fmt::join(tokens, " "));
}

namespace {

bool read_int(std::string_view& s, std::size_t digits, int& out) {
    if (s.size() < digits) return false;
    for (std::size_t i = 0; i < digits; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    std::from_chars(s.data(), s.data() + digits, out);
    s.remove_prefix(digits);
    return true;
}

bool expect(std::string_view& s, char c) {
    if (s.empty() || s.front() != c) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_int(s, 4, y) || !expect(s, '-') || !read_int(s, 2, mo) || !expect(s, '-') ||
        !read_int(s, 2, d))
        return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    long offset_minutes = 0;
    if (!s.empty()) {
        if (s.front() != 'T' && s.front() != ' ') return std::nullopt;
        s.remove_prefix(1);
        if (!read_int(s, 2, h) || !expect(s, ':') || !read_int(s, 2, mi) || !expect(s, ':') ||
            !read_int(s, 2, sec))
            return std::nullopt;
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
        if (!s.empty() && s.front() == '.') {
            s.remove_prefix(1);
            std::size_t n = 0;
            while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
            if (n == 0) return std::nullopt;
            s.remove_prefix(n);
        }
        if (!s.empty()) {
            if (s == "Z") {
                s = {};
            } else if (s.front() == '+' || s.front() == '-') {
                const int sign = s.front() == '+' ? 1 : -1;
                s.remove_prefix(1);
                int oh = 0, om = 0;
                if (!read_int(s, 2, oh) || !expect(s, ':') || !read_int(s, 2, om) || !s.empty())
                    return std::nullopt;
                offset_minutes = sign * (oh * 60L + om);
            } else {
                return std::nullopt;
            }
        }
    }
    const auto t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
    return time_point_cast<seconds>(t);
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss hms{t - day_start};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::string month_key(Timestamp t) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(t)};
    return fmt::format("{:04d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()));
}

}  // namespace leaders::corpus

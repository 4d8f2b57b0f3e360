#include "fairpm/timestamp.hpp"

#include <chrono>
#include <cstdio>

namespace fairpm {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Exactly `count` digits.
  std::optional<int> digits(int count) {
    int value = 0;
    for (int i = 0; i < count; ++i) {
      char c = peek();
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
      ++pos_;
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);

  Cursor in(text);
  bool negative_year = in.accept('-');
  auto y = in.digits(4);
  if (!y || !in.accept('-')) return std::nullopt;
  auto mo = in.digits(2);
  if (!mo || !in.accept('-')) return std::nullopt;
  auto d = in.digits(2);
  if (!d) return std::nullopt;

  int hh = 0, mm = 0, ss = 0, millis = 0;
  if (in.accept('T') || in.accept(' ')) {
    auto h = in.digits(2);
    if (!h || !in.accept(':')) return std::nullopt;
    auto m = in.digits(2);
    if (!m) return std::nullopt;
    hh = *h;
    mm = *m;
    if (in.accept(':')) {
      auto s = in.digits(2);
      if (!s) return std::nullopt;
      ss = *s;
      if (in.accept('.') || in.accept(',')) {
        int scale = 100;
        bool any = false;
        while (in.peek() >= '0' && in.peek() <= '9') {
          millis += (in.peek() - '0') * scale;
          scale /= 10;
          any = true;
          in.digits(1);
        }
        if (!any) return std::nullopt;
      }
    }
  }

  int offset_minutes = 0;
  if (in.accept('Z') || in.accept('z')) {
  } else if (in.peek() == '+' || in.peek() == '-') {
    int sign = in.peek() == '-' ? -1 : 1;
    in.accept(in.peek());
    auto oh = in.digits(2);
    if (!oh) return std::nullopt;
    in.accept(':');
    auto om = in.digits(2);
    if (!om) return std::nullopt;
    offset_minutes = sign * (*oh * 60 + *om);
  }
  if (!in.done()) return std::nullopt;

  year_month_day date{year{negative_year ? -*y : *y}, month{static_cast<unsigned>(*mo)},
                      day{static_cast<unsigned>(*d)}};
  if (!date.ok() || hh > 23 || mm > 59 || ss > 60) return std::nullopt;

  auto point = sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis} -
               minutes{offset_minutes};
  return Timestamp{duration_cast<milliseconds>(point.time_since_epoch()).count()};
}

std::string format_iso8601(Timestamp time) {
  using namespace std::chrono;
  sys_time<milliseconds> point{milliseconds{time.millis}};
  auto day_point = floor<days>(point);
  year_month_day date{day_point};
  auto rest = point - day_point;
  auto h = duration_cast<hours>(rest);
  rest -= h;
  auto m = duration_cast<minutes>(rest);
  rest -= m;
  auto s = duration_cast<seconds>(rest);
  rest -= s;

  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02uT%02d:%02d:%02d.%03d+00:00",
                static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()), static_cast<int>(h.count()),
                static_cast<int>(m.count()), static_cast<int>(s.count()),
                static_cast<int>(rest.count()));
  return buffer;
}

}  // namespace fairpm

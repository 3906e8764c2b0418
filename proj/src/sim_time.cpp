// Copyright 2026 The dtrust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dtrust/sim_time.hpp"

#include <cstdio>

#include "dtrust/errors.hpp"

namespace dtrust {

namespace chrono = std::chrono;

Date parse_date(std::string_view iso) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  std::string s(iso);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 || s.size() != 10) {
    throw Error(Errc::parse_error, "date must be YYYY-MM-DD, got '" + s + "'");
  }
  Date date{chrono::year{y}, chrono::month{static_cast<unsigned>(m)},
            chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw Error(Errc::parse_error, "non-existent calendar date '" + s + "'");
  }
  return date;
}

std::string render_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

SimTime to_sim_time(const Date& d) {
  return (chrono::sys_days{d} - chrono::sys_days{kSimEpoch}).count();
}

Date date_at(SimTime t) {
  return Date{chrono::sys_days{kSimEpoch} + chrono::days{t}};
}

bool age_at_least(const Date& birth, std::int64_t years, const Date& at) {
  Date target = birth + chrono::years{static_cast<int>(years)};
  if (!target.ok()) {
    // Feb 29 birthday in a non-leap year: the birthday falls on Mar 1.
    target = Date{target.year(), chrono::month{3}, chrono::day{1}};
  }
  return chrono::sys_days{target} <= chrono::sys_days{at};
}

}  // namespace dtrust

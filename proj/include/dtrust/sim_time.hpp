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

#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace dtrust {

// Simulated time is a count of whole days. Day 0 is 2020-01-01; the
// simulator clock advances one day per delivered message. There is no
// ambient clock anywhere: every expiry or validity check takes the clock
// as an explicit argument.
using SimTime = std::int64_t;

using Date = std::chrono::year_month_day;

inline constexpr Date kSimEpoch{std::chrono::year{2020}, std::chrono::month{1}, std::chrono::day{1}};

/// Parse "YYYY-MM-DD". Throws Error(parse_error) on malformed or
/// non-existent dates.
Date parse_date(std::string_view iso);

std::string render_date(const Date& d);

SimTime to_sim_time(const Date& d);
Date date_at(SimTime t);

/// True iff a person born on `birth` has reached age `years` on date `at`.
/// The birthday of someone born Feb 29 falls on Mar 1 in non-leap years.
bool age_at_least(const Date& birth, std::int64_t years, const Date& at);

}  // namespace dtrust

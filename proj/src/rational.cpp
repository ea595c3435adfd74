// Copyright 2026 The subcarnot authors
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

#include "subcarnot/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace subcarnot {

namespace {

std::int64_t parse_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty integer");
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("Rational: trailing characters in '" + s + "'");
  return v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational(parse_int(text));
  }
  // decimal: sign, integer part, fractional part
  std::string head = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  if (frac.size() > 17) throw std::invalid_argument("Rational: decimal too long: '" + text + "'");
  bool neg = false;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    neg = head[0] == '-';
    head = head.substr(1);
  }
  std::int64_t ip = head.empty() ? 0 : parse_int(head);
  std::int64_t num = ip;
  std::int64_t den = 1;
  for (char ch : frac) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::invalid_argument("Rational: bad decimal '" + text + "'");
    num = num * 10 + (ch - '0');
    den *= 10;
  }
  return Rational(neg ? -num : num, den);
}

}  // namespace subcarnot

// Copyright 2026 The ipte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IPTE_CSV_HPP_
#define IPTE_CSV_HPP_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ipte::csv {

struct Row {
  std::size_t line = 0;  // 1-based line on which the row starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: comma separated, optional double-quoted fields with ""
// escapes, CRLF or LF line ends. Blank lines are skipped. Throws DataError on
// an unterminated quote.
std::vector<Row> Parse(std::istream& in);

// Quotes the field only when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

}  // namespace ipte::csv

#endif  // IPTE_CSV_HPP_

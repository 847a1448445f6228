// Copyright 2026 The incoherent Authors
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

#include "incoherent/pauli.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "incoherent/errors.hpp"

namespace incoherent {

ComplexMatrix pauli(char label) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  switch (label) {
    case 'I': m << 1.0, 0.0, 0.0, 1.0; break;
    case 'X': m << 0.0, 1.0, 1.0, 0.0; break;
    case 'Y': m << 0.0, -i, i, 0.0; break;
    case 'Z': m << 1.0, 0.0, 0.0, -1.0; break;
    default: {
      std::ostringstream os;
      os << "unknown Pauli label '" << label << "'";
      throw ParseError(os.str());
    }
  }
  return m;
}

ComplexMatrix pauli_string(std::string_view word) {
  if (word.empty()) throw ParseError("empty Pauli word");
  ComplexMatrix out = pauli(word.front());
  for (std::size_t q = 1; q < word.size(); ++q) out = kron(out, pauli(word[q]));
  return out;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_number() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }
  double number() {
    skip_ws();
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }
  std::string_view word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected a Pauli word");
    return s_.substr(start, pos_ - start);
  }
  [[noreturn]] void fail(const char* msg) const {
    std::ostringstream os;
    os << "Pauli sum: " << msg << " at offset " << pos_ << " in \"" << s_ << "\"";
    throw ParseError(os.str());
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ComplexMatrix parse_pauli_sum(std::string_view expr) {
  Cursor cur(expr);
  if (cur.done()) throw ParseError("Pauli sum: empty expression");
  ComplexMatrix total;
  std::size_t width = 0;
  bool first = true;
  while (!cur.done()) {
    double sign = 1.0;
    if (cur.accept('+')) {
    } else if (cur.accept('-')) {
      sign = -1.0;
    } else if (!first) {
      cur.fail("expected '+' or '-'");
    }
    double coeff = 1.0;
    if (cur.at_number()) {
      coeff = cur.number();
      cur.accept('*');
    }
    const std::string_view w = cur.word();
    if (first) {
      width = w.size();
      const auto dim = Eigen::Index{1} << width;
      total = ComplexMatrix::Zero(dim, dim);
    } else if (w.size() != width) {
      cur.fail("Pauli words have different lengths");
    }
    total += (sign * coeff) * pauli_string(w);
    first = false;
  }
  return total;
}

}  // namespace incoherent

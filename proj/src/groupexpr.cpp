#include "nilsq/groupexpr.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilsq {

namespace {

[[noreturn]] void fail(const std::string& text, size_t pos, const std::string& what) {
  throw std::invalid_argument("group expression \"" + text + "\": " + what + " at position " +
                              std::to_string(pos));
}

struct Cursor {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  // Decimal literal, arbitrary precision.
  Int number(const char* what) {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail(text, start, std::string("expected ") + what);
    return Int(text.substr(start, pos - start));
  }
};

}  // namespace

CanonicalGroup parse_group_expr(const std::string& text) {
  Cursor c{text};
  std::vector<Int> orders;
  bool saw_zero_term = false;
  bool any_term = false;
  while (true) {
    c.skip_ws();
    size_t term_pos = c.pos;
    if (c.eat('0')) {
      saw_zero_term = true;
    } else if (c.eat('Z')) {
      if (c.eat('/')) {
        size_t order_pos = c.pos;
        Int d = c.number("a cyclic order");
        if (d < 2) fail(text, order_pos, "cyclic order must be at least 2");
        orders.push_back(d);
      } else if (c.eat('^')) {
        size_t exp_pos = c.pos;
        Int k = c.number("an exponent");
        if (k < 1) fail(text, exp_pos, "exponent must be at least 1");
        if (k > 4096) fail(text, exp_pos, "exponent too large");
        for (Int i = 0; i < k; ++i) orders.push_back(0);
      } else {
        orders.push_back(0);
      }
    } else {
      fail(text, term_pos, "expected a term ('0', 'Z', 'Z^k' or 'Z/d')");
    }
    any_term = true;
    if (c.done()) break;
    if (!c.eat('+')) fail(text, c.pos, "expected '+' or end of input");
    if (c.done()) fail(text, c.pos, "expected a term after '+'");
  }
  if (!any_term) fail(text, 0, "empty expression");
  (void)saw_zero_term;
  return CanonicalGroup::from_orders(orders);
}

std::string group_expr_to_string(const CanonicalGroup& g) { return g.to_string(); }

}  // namespace nilsq

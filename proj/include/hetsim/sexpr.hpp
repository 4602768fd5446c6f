#pragma once

// Minimal tree syntax shared by the connector DSL (`(pge a 1/2)`) and the
// functional surface used for liftings and formulas (`pge(a,1/2)`).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hetsim {

struct SExpr {
  bool list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  static SExpr make_atom(std::string a) {
    SExpr e;
    e.atom = std::move(a);
    return e;
  }
  static SExpr make_list(std::vector<SExpr> items) {
    SExpr e;
    e.list = true;
    e.items = std::move(items);
    return e;
  }

  bool is_atom() const { return !list; }
  /// Head atom of a list, or empty.
  std::string head() const { return list && !items.empty() && items[0].is_atom() ? items[0].atom : std::string(); }

  /// `(head a b)`.
  std::string str() const;
  /// `head(a,b)`; a list with only a head prints as the bare head.
  std::string functional() const;

  friend bool operator==(const SExpr& a, const SExpr& b) {
    return a.list == b.list && a.atom == b.atom && a.items == b.items;
  }
};

/// Parses exactly one s-expression; `#` starts a comment. Throws ParseError.
SExpr parse_sexpr(std::string_view text);

/// Cursor over functional text, so callers can embed it in larger grammars.
class FunctionalReader {
 public:
  explicit FunctionalReader(std::string_view text) : text_(text) {}
  /// Reads `head` or `head(arg,...)` starting at the cursor.
  SExpr read();
  void skip_space();
  bool at_end();
  char peek();
  void expect(char c);
  std::size_t position() const { return pos_; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::string read_atom();
  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Parses one complete functional expression.
SExpr parse_functional(std::string_view text);

/// Whether `a` can be printed without quotes.
bool is_plain_atom(std::string_view a);

}  // namespace hetsim

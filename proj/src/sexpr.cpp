#include "hetsim/sexpr.hpp"

#include <cctype>

#include "hetsim/errors.hpp"

namespace hetsim {

namespace {

bool special(char c) {
  switch (c) {
    case '(':
    case ')':
    case '"':
    case ',':
    case '<':
    case '>':
    case '&':
    case '|':
    case '#':
      return true;
    default:
      return std::isspace(static_cast<unsigned char>(c)) != 0;
  }
}

std::string quote(const std::string& a) {
  if (is_plain_atom(a)) return a;
  std::string out = "\"";
  for (char c : a) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void locate(std::string_view text, std::size_t pos, std::size_t& line, std::size_t& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    std::size_t line, column;
    locate(text_, pos_, line, column);
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      e.list = true;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
    } else if (text_[pos_] == ')') {
      fail("unexpected ')'");
    } else {
      e.atom = read_atom();
    }
    e.line = line;
    e.column = column;
    return e;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line, column;
    locate(text_, pos_, line, column);
    throw ParseError(what, line, column);
  }

 private:
  std::string read_atom() {
    if (text_[pos_] == '"') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && (!special(text_[pos_]) || text_[pos_] == ',' || text_[pos_] == '<' ||
                                   text_[pos_] == '>' || text_[pos_] == '&' || text_[pos_] == '|'))
      ++pos_;
    if (start == pos_) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_plain_atom(std::string_view a) {
  if (a.empty()) return false;
  for (char c : a)
    if (special(c)) return false;
  return true;
}

std::string SExpr::str() const {
  if (!list) return quote(atom);
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].str();
  }
  return out + ")";
}

std::string SExpr::functional() const {
  if (!list) return quote(atom);
  if (items.empty()) return "()";
  std::string out = items[0].functional();
  if (items.size() == 1) return out;
  out += '(';
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (i > 1) out += ',';
    out += items[i].functional();
  }
  return out + ")";
}

SExpr parse_sexpr(std::string_view text) {
  SexprReader reader(text);
  SExpr e = reader.read();
  if (!reader.at_end()) reader.fail("trailing input after expression");
  return e;
}

void FunctionalReader::skip_space() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

bool FunctionalReader::at_end() {
  skip_space();
  return pos_ >= text_.size();
}

char FunctionalReader::peek() {
  skip_space();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

void FunctionalReader::expect(char c) {
  if (peek() != c) fail(std::string("expected '") + c + "'");
  ++pos_;
}

void FunctionalReader::fail(const std::string& what) const {
  std::size_t line, column;
  locate(text_, pos_, line, column);
  throw ParseError(what, line, column);
}

std::string FunctionalReader::read_atom() {
  skip_space();
  if (pos_ >= text_.size()) fail("unexpected end of input");
  if (text_[pos_] == '"') {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }
  std::size_t start = pos_;
  while (pos_ < text_.size() && !special(text_[pos_])) ++pos_;
  if (start == pos_) fail(std::string("unexpected character '") + text_[pos_] + "'");
  return std::string(text_.substr(start, pos_ - start));
}

SExpr FunctionalReader::read() {
  skip_space();
  std::size_t line, column;
  locate(text_, pos_, line, column);
  SExpr head = SExpr::make_atom(read_atom());
  head.line = line;
  head.column = column;
  if (peek() != '(') return head;
  ++pos_;
  std::vector<SExpr> items{head};
  if (peek() == ')') {
    ++pos_;
  } else {
    while (true) {
      items.push_back(read());
      char c = peek();
      if (c == ',') {
        ++pos_;
        continue;
      }
      if (c == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
  }
  SExpr e = SExpr::make_list(std::move(items));
  e.line = line;
  e.column = column;
  return e;
}

SExpr parse_functional(std::string_view text) {
  FunctionalReader reader(text);
  SExpr e = reader.read();
  if (!reader.at_end()) reader.fail("trailing input after expression");
  return e;
}

}  // namespace hetsim

// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/abstraction.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tegcer {
namespace {

constexpr std::array<std::string_view, 37> kCKeywords = {
    "auto",     "break",    "case",     "char",    "const",    "continue", "default",
    "do",       "double",   "else",     "enum",    "extern",   "float",    "for",
    "goto",     "if",       "inline",   "int",     "long",     "register", "restrict",
    "return",   "short",    "signed",   "sizeof",  "static",   "struct",   "switch",
    "typedef",  "union",    "unsigned", "void",    "volatile", "while",    "_Bool",
    "_Complex", "_Imaginary"};

// Abstract tags double as reserved words so abstract lines re-lex unchanged.
constexpr std::array<std::string_view, 13> kTagWords = {
    "INT",   "FLOAT", "DOUBLE", "CHAR",        "LONG",          "ARRAY",        "POINTER",
    "FUNC",  "INVALID", "LITERAL_INT", "LITERAL_FLOAT", "LITERAL_CHAR", "LITERAL_STR"};

constexpr std::array<std::string_view, 13> kStdlibNames = {
    "printf", "scanf",  "main",   "getchar", "putchar", "strlen", "strcpy",
    "strcmp", "sqrt",   "pow",    "abs",     "malloc",  "free"};

constexpr std::array<std::string_view, 3> kThreeCharOps = {"<<=", ">>=", "..."};
constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|="};
constexpr std::string_view kOneCharOps = "+-*/%=<>!~&|^?:.";
constexpr std::string_view kPunctuation = ";,()[]{}";

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& table, std::string_view word) {
  return std::find(table.begin(), table.end(), word) != table.end();
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Returns one past the closing quote, or npos when the literal is unterminated.
std::size_t scan_quoted(std::string_view line, std::size_t start, char quote) {
  for (std::size_t i = start + 1; i < line.size(); ++i) {
    if (line[i] == '\\') {
      ++i;
    } else if (line[i] == quote) {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

Token lex_number(std::string_view line, std::size_t& pos) {
  const std::size_t start = pos;
  const bool hex = line.size() > pos + 1 && line[pos] == '0' &&
                   (line[pos + 1] == 'x' || line[pos + 1] == 'X');
  bool is_float = false;
  while (pos < line.size()) {
    const char c = line[pos];
    if (c == '.') {
      is_float = true;
      ++pos;
    } else if (((!hex && (c == 'e' || c == 'E')) || (hex && (c == 'p' || c == 'P')))) {
      is_float = true;
      ++pos;
      if (pos < line.size() && (line[pos] == '+' || line[pos] == '-')) ++pos;
    } else if (is_ident_char(c)) {
      ++pos;
    } else {
      break;
    }
  }
  return {is_float ? TokenKind::kFloatLiteral : TokenKind::kIntLiteral,
          std::string(line.substr(start, pos - start))};
}

}  // namespace

bool is_c_keyword(std::string_view word) { return contains(kCKeywords, word); }

bool is_stdlib_name(std::string_view name) { return contains(kStdlibNames, name); }

std::vector<Token> tokenize(std::string_view line) {
  bool in_comment = false;
  return tokenize(line, in_comment);
}

std::vector<Token> tokenize(std::string_view line, bool& in_block_comment) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (in_block_comment) {
      const auto end = line.find("*/", pos);
      if (end == std::string_view::npos) return out;
      in_block_comment = false;
      pos = end + 2;
      continue;
    }
    const char c = line[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    const std::string_view rest = line.substr(pos);
    if (rest.starts_with("//")) break;
    if (rest.starts_with("/*")) {
      in_block_comment = true;
      pos += 2;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t end = pos;
      while (end < line.size() && is_ident_char(line[end])) ++end;
      std::string word(line.substr(pos, end - pos));
      const bool reserved = is_c_keyword(word) || contains(kTagWords, word);
      out.push_back({reserved ? TokenKind::kKeyword : TokenKind::kIdentifier, std::move(word)});
      pos = end;
      continue;
    }
    if (is_digit(c) || (c == '.' && rest.size() > 1 && is_digit(rest[1]))) {
      out.push_back(lex_number(line, pos));
      continue;
    }
    if (c == '\'' || c == '"') {
      const auto end = scan_quoted(line, pos, c);
      if (end != std::string_view::npos) {
        out.push_back({c == '\'' ? TokenKind::kCharLiteral : TokenKind::kStringLiteral,
                       std::string(line.substr(pos, end - pos))});
        pos = end;
      } else {
        out.push_back({TokenKind::kPunctuation, std::string(1, c)});
        ++pos;
      }
      continue;
    }
    bool matched = false;
    for (auto op : kThreeCharOps) {
      if (rest.starts_with(op)) {
        out.push_back({TokenKind::kOperator, std::string(op)});
        pos += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (auto op : kTwoCharOps) {
      if (rest.starts_with(op)) {
        out.push_back({TokenKind::kOperator, std::string(op)});
        pos += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kOneCharOps.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::kOperator, std::string(1, c)});
    } else {
      // Includes the real punctuators and any stray byte (#, @, $, \, ...).
      out.push_back({TokenKind::kPunctuation, std::string(1, c)});
    }
    ++pos;
  }
  return out;
}

std::string_view tag_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::kInt: return "INT";
    case TypeTag::kFloat: return "FLOAT";
    case TypeTag::kDouble: return "DOUBLE";
    case TypeTag::kChar: return "CHAR";
    case TypeTag::kLong: return "LONG";
    case TypeTag::kArray: return "ARRAY";
    case TypeTag::kPointer: return "POINTER";
    case TypeTag::kFunc: return "FUNC";
    case TypeTag::kStdlib: return "STDLIB";
  }
  return "INVALID";
}

void SymbolTable::set(std::string name, TypeTag tag) {
  if (is_stdlib_name(name)) tag = TypeTag::kStdlib;
  entries_.insert_or_assign(std::move(name), tag);
}

std::optional<TypeTag> SymbolTable::lookup(std::string_view name) const {
  if (is_stdlib_name(name)) return TypeTag::kStdlib;
  if (auto it = entries_.find(name); it != entries_.end()) return it->second;
  return std::nullopt;
}

namespace {

bool is_type_specifier(const Token& t) {
  static constexpr std::array<std::string_view, 10> kSpecs = {
      "int", "float", "double", "char", "long", "short", "signed", "unsigned", "void", "_Bool"};
  return t.kind == TokenKind::kKeyword && contains(kSpecs, t.text);
}

bool is_qualifier(const Token& t) {
  static constexpr std::array<std::string_view, 8> kQuals = {
      "const", "volatile", "static", "extern", "register", "auto", "inline", "restrict"};
  return t.kind == TokenKind::kKeyword && contains(kQuals, t.text);
}

bool is(const std::vector<Token>& toks, std::size_t i, std::size_t end, std::string_view text) {
  return i < end && toks[i].text == text &&
         (toks[i].kind == TokenKind::kPunctuation || toks[i].kind == TokenKind::kOperator);
}

// Index of the bracket closing the one at `open`, or `end` if unbalanced.
std::size_t matching(const std::vector<Token>& toks, std::size_t open, std::size_t end) {
  const std::string& o = toks[open].text;
  const std::string_view c = o == "(" ? ")" : o == "[" ? "]" : "}";
  int depth = 0;
  for (std::size_t i = open; i < end; ++i) {
    if (toks[i].kind != TokenKind::kPunctuation) continue;
    if (toks[i].text == o) ++depth;
    else if (toks[i].text == c && --depth == 0) return i;
  }
  return end;
}

class DeclarationScanner {
 public:
  explicit DeclarationScanner(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SymbolTable run() {
    std::size_t i = 0;
    while (i < toks_.size()) {
      if (is_type_specifier(toks_[i]) || (is_qualifier(toks_[i]) && i + 1 < toks_.size() &&
                                           is_type_specifier(toks_[i + 1]))) {
        i = std::max(declaration(i, toks_.size(), /*single=*/false), i + 1);
      } else {
        ++i;
      }
    }
    return std::move(table_);
  }

 private:
  // Parses "specifiers declarator {, declarator}" starting at `i`; returns the
  // index just past what was consumed.
  std::size_t declaration(std::size_t i, std::size_t end, bool single) {
    bool saw_char = false, saw_float = false, saw_double = false, saw_long = false;
    bool saw_void = false;
    while (i < end && (is_type_specifier(toks_[i]) || is_qualifier(toks_[i]))) {
      const auto& t = toks_[i].text;
      saw_char |= t == "char";
      saw_float |= t == "float";
      saw_double |= t == "double";
      saw_long |= t == "long";
      saw_void |= t == "void";
      ++i;
    }
    const TypeTag base = saw_char     ? TypeTag::kChar
                         : saw_double ? TypeTag::kDouble
                         : saw_float  ? TypeTag::kFloat
                         : saw_long   ? TypeTag::kLong
                                      : TypeTag::kInt;

    while (i < end) {
      int stars = 0;
      while (i < end && (is(toks_, i, end, "*") || is_qualifier(toks_[i]))) {
        if (toks_[i].text == "*") ++stars;
        ++i;
      }
      if (i >= end || toks_[i].kind != TokenKind::kIdentifier) return i;
      std::string name = toks_[i].text;
      ++i;

      if (is(toks_, i, end, "(")) {
        const std::size_t close = matching(toks_, i, end);
        parameters(i + 1, close);
        table_.set(std::move(name), TypeTag::kFunc);
        i = std::min(close + 1, end);
        if (is(toks_, i, end, "{")) return i;
      } else {
        bool array = false;
        while (is(toks_, i, end, "[")) {
          array = true;
          i = std::min(matching(toks_, i, end) + 1, end);
        }
        if (array) table_.set(std::move(name), TypeTag::kArray);
        else if (stars > 0) table_.set(std::move(name), TypeTag::kPointer);
        else if (!saw_void) table_.set(std::move(name), base);
      }

      if (is(toks_, i, end, "=")) i = skip_initializer(i + 1, end);
      if (!single && is(toks_, i, end, ",")) {
        ++i;
        continue;
      }
      return i;
    }
    return i;
  }

  void parameters(std::size_t begin, std::size_t end) {
    std::size_t seg = begin;
    int depth = 0;
    for (std::size_t i = begin; i <= end; ++i) {
      const bool at_end = i == end;
      if (!at_end && toks_[i].kind == TokenKind::kPunctuation) {
        const auto& t = toks_[i].text;
        if (t == "(" || t == "[" || t == "{") ++depth;
        else if (t == ")" || t == "]" || t == "}") --depth;
      }
      if (at_end || (depth == 0 && is(toks_, i, end, ","))) {
        if (seg < i && (is_type_specifier(toks_[seg]) || is_qualifier(toks_[seg]))) {
          declaration(seg, i, /*single=*/true);
        }
        seg = i + 1;
      }
    }
  }

  std::size_t skip_initializer(std::size_t i, std::size_t end) const {
    int depth = 0;
    for (; i < end; ++i) {
      if (toks_[i].kind != TokenKind::kPunctuation) continue;
      const auto& t = toks_[i].text;
      if (t == "(" || t == "[" || t == "{") {
        ++depth;
      } else if (t == ")" || t == "]" || t == "}") {
        if (depth == 0) return i;
        --depth;
      } else if (depth == 0 && (t == "," || t == ";")) {
        return i;
      }
    }
    return i;
  }

  std::vector<Token> toks_;
  SymbolTable table_;
};

}  // namespace

SymbolTable build_symbol_table(std::string_view source) {
  std::vector<Token> toks;
  bool in_comment = false;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    std::string_view line = source.substr(pos, nl - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (in_comment || first == std::string_view::npos || line[first] != '#') {
      auto lexed = tokenize(line, in_comment);
      toks.insert(toks.end(), std::make_move_iterator(lexed.begin()),
                  std::make_move_iterator(lexed.end()));
    }
    pos = nl + 1;
  }
  return DeclarationScanner(std::move(toks)).run();
}

std::string AbstractLine::render() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

AbstractLine abstract_line(std::string_view line, const SymbolTable& symtab) {
  AbstractLine out;
  for (auto& tok : tokenize(line)) {
    switch (tok.kind) {
      case TokenKind::kIdentifier: {
        const auto tag = symtab.lookup(tok.text);
        if (!tag) out.tokens.emplace_back(kInvalidTag);
        else if (*tag == TypeTag::kStdlib) out.tokens.push_back(std::move(tok.text));
        else out.tokens.emplace_back(tag_name(*tag));
        break;
      }
      case TokenKind::kIntLiteral: out.tokens.emplace_back(kLiteralIntTag); break;
      case TokenKind::kFloatLiteral: out.tokens.emplace_back(kLiteralFloatTag); break;
      case TokenKind::kCharLiteral: out.tokens.emplace_back(kLiteralCharTag); break;
      case TokenKind::kStringLiteral: out.tokens.emplace_back(kLiteralStrTag); break;
      default: out.tokens.push_back(std::move(tok.text)); break;
    }
  }
  return out;
}

}  // namespace tegcer

// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tegcer {

enum class TokenKind {
  kKeyword,
  kIdentifier,
  kOperator,
  kPunctuation,
  kIntLiteral,
  kFloatLiteral,
  kCharLiteral,
  kStringLiteral,
};

struct Token {
  TokenKind kind;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Lexes a single line of C. Comments are dropped, whitespace is discarded,
/// and any byte that starts no C token becomes a one-character punctuation
/// token. Total: every input yields a token list.
///
/// The abstract tags (INT, INVALID, LITERAL_INT, ...) lex as keywords, so an
/// already-abstracted line round-trips through tokenize/abstract_line.
std::vector<Token> tokenize(std::string_view line);

/// Same as tokenize() but tracks `/* ... */` comments that span lines.
/// `in_block_comment` carries the state from one line to the next.
std::vector<Token> tokenize(std::string_view line, bool& in_block_comment);

bool is_c_keyword(std::string_view word);

// Type tags a symbol can resolve to.
enum class TypeTag { kInt, kFloat, kDouble, kChar, kLong, kArray, kPointer, kFunc, kStdlib };

std::string_view tag_name(TypeTag tag);

/// Names that always resolve to STDLIB and are kept verbatim in abstract lines.
bool is_stdlib_name(std::string_view name);

class SymbolTable {
 public:
  void set(std::string name, TypeTag tag);

  // Allowlisted library names resolve to kStdlib whether declared or not.
  std::optional<TypeTag> lookup(std::string_view name) const;

  const std::map<std::string, TypeTag, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, TypeTag, std::less<>> entries_;
};

/// Declaration scanner over a whole program: base-type declarations,
/// declarator lists, arrays, pointers, function definitions, prototypes and
/// their parameters. Later declarations overwrite earlier ones.
SymbolTable build_symbol_table(std::string_view source);

struct AbstractLine {
  std::vector<std::string> tokens;

  /// Tokens joined by single spaces, e.g. "INT = INVALID ;".
  std::string render() const;

  friend bool operator==(const AbstractLine&, const AbstractLine&) = default;
};

AbstractLine abstract_line(std::string_view line, const SymbolTable& symtab);

// Literal tags.
inline constexpr std::string_view kInvalidTag = "INVALID";
inline constexpr std::string_view kLiteralIntTag = "LITERAL_INT";
inline constexpr std::string_view kLiteralFloatTag = "LITERAL_FLOAT";
inline constexpr std::string_view kLiteralCharTag = "LITERAL_CHAR";
inline constexpr std::string_view kLiteralStrTag = "LITERAL_STR";

}  // namespace tegcer

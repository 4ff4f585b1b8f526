// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/synth.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <random>
#include <regex>
#include <string_view>
#include <utility>

#include "tegcer/error.hpp"

namespace tegcer {
namespace {

using Rng = std::mt19937_64;

std::size_t draw(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[draw(rng, N)];
}

constexpr std::array<std::string_view, 6> kSkeletons = {
    // running sum over an array
    R"(#include <stdio.h>

int main() {
    int $N, $I, $S = 0;
    int $A[$Z];
    scanf("%d", &$N);
    for ($I = 0; $I < $N; $I++) {
        scanf("%d", &$A[$I]);
        $S = $S + $A[$I];
    }
    if ($S % $K == 0) {
        printf("$W1\n");
    } else {
        printf("$W2\n");
    }
    printf("%d\n", $S);
    return 0;
}
)",
    // float average
    R"(#include <stdio.h>

int main() {
    int $N, $I;
    float $X, $T = 0, $V;
    scanf("%d", &$N);
    for ($I = 0; $I < $N; $I++) {
        scanf("%f", &$X);
        $T = $T + $X;
    }
    $V = $T / $N;
    printf("%.2f\n", $V);
    return 0;
}
)",
    // maximum of two through a helper
    R"(#include <stdio.h>

int $M(int $P, int $Q) {
    if ($P > $Q) {
        return $P;
    }
    return $Q;
}

int main() {
    int $B, $C;
    scanf("%d", &$B);
    scanf("%d", &$C);
    printf("%d\n", $M($B, $C));
    return 0;
}
)",
    // count a letter on one input line
    R"(#include <stdio.h>

int main() {
    char $H;
    int $S = 0;
    $H = getchar();
    while ($H != '\n') {
        if ($H == '$L') {
            $S = $S + 1;
        }
        $H = getchar();
    }
    printf("%d\n", $S);
    return 0;
}
)",
    // factorial
    R"(#include <stdio.h>

int main() {
    int $N, $I;
    long $F = 1;
    scanf("%d", &$N);
    $I = 1;
    while ($I <= $N) {
        $F = $F * $I;
        $I++;
    }
    printf("%ld\n", $F);
    return 0;
}
)",
    // difference of squares
    R"(#include <stdio.h>

int main() {
    int $B, $C, $S;
    scanf("%d", &$B);
    scanf("%d", &$C);
    $S = ($B + $C) * ($B - $C);
    if ($S % $K == 0) {
        printf("$W1\n");
    }
    printf("%d %d\n", $S, $B);
    return 0;
}
)",
};

// Each placeholder draws from its own pool; pools are disjoint so names never
// collide inside one program.
std::string instantiate(std::string_view skeleton, Rng& rng) {
  static constexpr std::array<std::string_view, 4> kCounts = {"n", "m", "num", "size"};
  static constexpr std::array<std::string_view, 3> kLoops = {"i", "j", "k"};
  static constexpr std::array<std::string_view, 4> kSums = {"sum", "total", "s", "acc"};
  static constexpr std::array<std::string_view, 4> kArrays = {"a", "arr", "nums", "vals"};
  static constexpr std::array<std::string_view, 3> kFloats = {"x", "f", "value"};
  static constexpr std::array<std::string_view, 3> kFloatSums = {"t", "fsum", "tot"};
  static constexpr std::array<std::string_view, 3> kAverages = {"avg", "mean", "av"};
  static constexpr std::array<std::string_view, 3> kFuncs = {"max", "bigger", "maxof"};
  static constexpr std::array<std::string_view, 3> kParams1 = {"p", "u", "first"};
  static constexpr std::array<std::string_view, 3> kParams2 = {"q", "w", "second"};
  static constexpr std::array<std::string_view, 3> kInts1 = {"b", "x1", "left"};
  static constexpr std::array<std::string_view, 3> kInts2 = {"c", "y1", "right"};
  static constexpr std::array<std::string_view, 3> kChars = {"ch", "c1", "letter"};
  static constexpr std::array<std::string_view, 3> kFacts = {"fact", "prod", "result"};
  static constexpr std::array<std::string_view, 4> kLetters = {"a", "e", "x", "z"};
  static constexpr std::array<std::string_view, 4> kSizes = {"100", "50", "1000", "20"};
  static constexpr std::array<std::string_view, 4> kMods = {"2", "3", "5", "7"};
  static constexpr std::array<std::string_view, 4> kWords1 = {"even", "yes", "YES", "divisible"};
  static constexpr std::array<std::string_view, 4> kWords2 = {"odd", "no", "NO", "not divisible"};

  const std::array<std::pair<std::string_view, std::string_view>, 19> subs = {{
      {"$N", pick(rng, kCounts)},   {"$I", pick(rng, kLoops)},      {"$S", pick(rng, kSums)},
      {"$A", pick(rng, kArrays)},   {"$X", pick(rng, kFloats)},     {"$T", pick(rng, kFloatSums)},
      {"$V", pick(rng, kAverages)}, {"$M", pick(rng, kFuncs)},      {"$P", pick(rng, kParams1)},
      {"$Q", pick(rng, kParams2)},  {"$B", pick(rng, kInts1)},      {"$C", pick(rng, kInts2)},
      {"$H", pick(rng, kChars)},    {"$F", pick(rng, kFacts)},      {"$L", pick(rng, kLetters)},
      {"$Z", pick(rng, kSizes)},    {"$K", pick(rng, kMods)},       {"$W1", pick(rng, kWords1)},
      {"$W2", pick(rng, kWords2)},
  }};
  std::string out;
  out.reserve(skeleton.size());
  for (std::size_t i = 0; i < skeleton.size();) {
    bool replaced = false;
    if (skeleton[i] == '$') {
      // Longest key first so $W1 is not read as $W.
      std::size_t best = 0;
      std::string_view value;
      for (const auto& [key, v] : subs) {
        if (skeleton.substr(i, key.size()) == key && key.size() > best) {
          best = key.size();
          value = v;
        }
      }
      if (best > 0) {
        out += value;
        i += best;
        replaced = true;
      }
    }
    if (!replaced) out += skeleton[i++];
  }
  return out;
}

std::string_view trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  return s.substr(b);
}

bool starts_with_any(std::string_view s, std::initializer_list<std::string_view> prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(), [&](std::string_view p) { return s.starts_with(p); });
}

bool is_declaration(std::string_view t) { return starts_with_any(t, {"int ", "float ", "char ", "long "}); }

std::optional<std::string> replace_first(const std::string& line, std::string_view from, std::string_view to,
                                         std::size_t start = 0) {
  const auto pos = line.find(from, start);
  if (pos == std::string::npos) return std::nullopt;
  return line.substr(0, pos) + std::string(to) + line.substr(pos + from.size());
}

struct LineContext {
  const std::vector<std::string>& lines;
  std::size_t index;
  Rng& rng;
};

using Mutation = std::function<std::optional<std::string>(const std::string&, LineContext&)>;

std::optional<std::string> drop_final_semicolon(const std::string& line) {
  if (!line.ends_with(";")) return std::nullopt;
  return line.substr(0, line.size() - 1);
}

// Names declared with a plain scalar type in `source`, by type keyword.
std::vector<std::pair<std::string, std::string>> scalar_names(const std::vector<std::string>& lines) {
  static const std::regex decl(R"(^\s*(int|float|char|long) (.*);$)");
  static const std::regex name(R"(^\s*([A-Za-z_]\w*)\s*(=.*)?$)");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& l : lines) {
    std::smatch m;
    if (!std::regex_match(l, m, decl)) continue;
    const auto type = m[1].str();
    std::string rest = m[2].str();
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto end = rest.find(',', start);
      if (end == std::string::npos) end = rest.size();
      const auto part = rest.substr(start, end - start);
      std::smatch nm;
      if (std::regex_match(part, nm, name)) out.emplace_back(nm[1].str(), type);
      start = end + 1;
    }
  }
  return out;
}

const std::vector<std::pair<std::string, Mutation>>& mutations() {
  static const std::vector<std::pair<std::string, Mutation>> kMutations = {
      {"drop-semicolon-statement",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         const auto t = trimmed(line);
         if (is_declaration(t) || t.starts_with("return") || t.starts_with("for")) return std::nullopt;
         return drop_final_semicolon(line);
       }},
      {"drop-semicolon-return",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!trimmed(line).starts_with("return ")) return std::nullopt;
         return drop_final_semicolon(line);
       }},
      {"drop-semicolon-declaration",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!is_declaration(trimmed(line)) || line.ends_with("{")) return std::nullopt;
         return drop_final_semicolon(line);
       }},
      {"equality-to-assignment",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (line.find(" % ") == std::string::npos) return std::nullopt;
         return replace_first(line, " == ", " = ");
       }},
      {"drop-close-paren-condition",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         const auto t = trimmed(line);
         if (!starts_with_any(t, {"if (", "while ("}) || !line.ends_with(") {")) return std::nullopt;
         return line.substr(0, line.size() - 3) + " {";
       }},
      {"drop-close-paren-call",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!starts_with_any(trimmed(line), {"printf(", "scanf("}) || !line.ends_with(");")) return std::nullopt;
         return line.substr(0, line.size() - 2) + ";";
       }},
      {"extra-close-paren-call",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!starts_with_any(trimmed(line), {"printf(", "scanf("}) || !line.ends_with(");")) return std::nullopt;
         return line.substr(0, line.size() - 2) + "));";
       }},
      {"for-comma-first",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!trimmed(line).starts_with("for (")) return std::nullopt;
         return replace_first(line, "; ", ", ");
       }},
      {"for-comma-second",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!trimmed(line).starts_with("for (")) return std::nullopt;
         const auto first = line.find("; ");
         if (first == std::string::npos) return std::nullopt;
         return replace_first(line, "; ", ", ", first + 2);
       }},
      {"undeclared-identifier",
       [](const std::string& line, LineContext& ctx) -> std::optional<std::string> {
         static constexpr std::array<std::string_view, 6> kUnknown = {"xyz", "val", "num1", "temp", "res", "cnt"};
         const auto t = trimmed(line);
         if (is_declaration(t) || t.starts_with("#") || line.ends_with("{")) return std::nullopt;
         const bool io_line = starts_with_any(t, {"scanf(", "printf("});
         std::vector<std::pair<std::size_t, std::size_t>> spots;  // (pos, len)
         for (const auto& [name, type] : scalar_names(ctx.lines)) {
           // Formatted I/O hides the type behind the format string; keep those
           // edits to int so the abstract line determines the fix.
           if (io_line && type != "int") continue;
           const std::regex word("\\b" + name + "\\b");
           for (auto it = std::sregex_iterator(line.begin(), line.end(), word); it != std::sregex_iterator(); ++it) {
             const auto pos = static_cast<std::size_t>(it->position());
             // Skip text inside string or char literals.
             if (std::count(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(pos), '"') % 2 == 1) continue;
             if (pos > 0 && line[pos - 1] == '\'') continue;
             spots.emplace_back(pos, name.size());
           }
         }
         if (spots.empty()) return std::nullopt;
         std::sort(spots.begin(), spots.end());
         const auto [pos, len] = spots[draw(ctx.rng, spots.size())];
         return line.substr(0, pos) + std::string(pick(ctx.rng, kUnknown)) + line.substr(pos + len);
       }},
      {"extra-closing-brace",
       [](const std::string& line, LineContext& ctx) -> std::optional<std::string> {
         if (line != "}" || ctx.index + 1 != ctx.lines.size()) return std::nullopt;
         return std::string("}}");
       }},
      {"misspelled-return",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!trimmed(line).starts_with("return ")) return std::nullopt;
         return replace_first(line, "return", "retrun");
       }},
      {"missing-multiplication",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         return replace_first(line, ") * (", ")(");
       }},
      {"missing-comma-arguments",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!starts_with_any(trimmed(line), {"printf(", "scanf("})) return std::nullopt;
         return replace_first(line, "\", ", "\" ");
       }},
      {"reversed-less-equal",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         return replace_first(line, " <= ", " =< ");
       }},
      {"drop-open-paren-if",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!trimmed(line).starts_with("if (")) return std::nullopt;
         return replace_first(line, "if (", "if ");
       }},
      {"declaration-missing-comma",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!is_declaration(trimmed(line)) || line.ends_with("{")) return std::nullopt;
         return replace_first(line, ", ", " ");
       }},
      {"equality-in-initializer",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!is_declaration(trimmed(line)) || line.ends_with("{")) return std::nullopt;
         return replace_first(line, " = ", " == ");
       }},
      {"doubled-comma-declaration",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         if (!is_declaration(trimmed(line)) || line.ends_with("{")) return std::nullopt;
         return replace_first(line, ", ", ",, ");
       }},
      {"drop-close-bracket",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         const auto open = line.find('[');
         if (open == std::string::npos || is_declaration(trimmed(line))) return std::nullopt;
         return replace_first(line, "]", "", open);
       }},
      {"not-equal-to-not",
       [](const std::string& line, LineContext&) -> std::optional<std::string> {
         return replace_first(line, " != ", " ! ");
       }},
  };
  return kMutations;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  for (const auto line : split_lines(text)) out.emplace_back(line);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

std::vector<std::string> synth_programs(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(instantiate(kSkeletons[i % kSkeletons.size()], rng));
  return out;
}

std::vector<std::string> synth_mutations() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : mutations()) names.push_back(name);
  return names;
}

std::vector<ProgramPair> synthesize_corpus(const SynthOptions& options) {
  Rng rng(options.seed);
  const auto& muts = mutations();
  std::vector<ProgramPair> out;
  out.reserve(options.pairs);
  std::size_t attempts = 0;
  while (out.size() < options.pairs) {
    if (++attempts > options.pairs * 100 + 1000) throw Error("synthetic corpus generation made no progress");
    const auto& [name, mutate] = muts[out.size() % muts.size()];
    const auto program = instantiate(kSkeletons[draw(rng, kSkeletons.size())], rng);
    const auto lines = lines_of(program);
    std::vector<std::pair<std::size_t, std::string>> candidates;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      LineContext ctx{lines, i, rng};
      if (auto mutated = mutate(lines[i], ctx); mutated && *mutated != lines[i]) candidates.emplace_back(i, *mutated);
    }
    if (candidates.empty()) continue;
    auto [index, mutated] = candidates[draw(rng, candidates.size())];
    auto buggy = lines;
    buggy[index] = std::move(mutated);
    out.push_back({"synth-" + std::to_string(out.size() + 1), join_lines(buggy), program, name});
  }
  return out;
}

}  // namespace tegcer

// Copyright 2026 The xlsent Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XLSENT_DETAIL_EMOTICONS_V1_HPP
#define XLSENT_DETAIL_EMOTICONS_V1_HPP

// Embedded copy of data/emoticons_v1.txt (kept identical, checked by tests).

namespace xlsent::detail {

inline constexpr const char* kEmoticonsV1 = R"xlsent(# Emoticon patterns, ICU regular-expression syntax, one pattern per line.
# Matching is case-insensitive and runs on text that has already been
# case/width folded. Patterns are tried in file order at each position.
#   @version N      names the pattern-set version recorded in model fingerprints
#   @literal TEXT   registers TEXT verbatim (rare expressions kept in an ad hoc list)
@version 1

# kaomoji: a parenthesised face with optional arms and nested outer parens,
# e.g. (^_^)  (*^▽^*)  (´・ω・`)  (((o(*°▽°*)o)))
[(（]*[oｏ0ヽ٩＼\\]?[(（](?=[^()（）\s]{2})(?:[oOｏtT]|[^\s()（）\p{Han}\p{Hiragana}\p{Katakana}\p{Latin}\p{N}]){0,8}[\^▽∀ω´｀`°゜・_;；＾*≧≦＞＜￣Дд∇⌒益ᴗ~\-'](?:[oOｏtT]|[^\s()（）\p{Han}\p{Hiragana}\p{Katakana}\p{Latin}\p{N}]){0,8}[)）][oｏ0ノ۶／/]?[)）]*

# western faces :-)  ;)  :D  =P  :'(  :/  :3
[:;=][\-o\^'’]?[)\](\[dp/\\|@3<>}{*x]+(?![\p{L}\p{N}])
# reversed western faces (:  (-:
(?<![\p{L}\p{N}])[(\[][\-o'^]?[:;=](?![\p{L}\p{N}])
(?<![\p{L}\p{N}])xd+(?![\p{L}\p{N}])
# hearts
<\/?3+(?![\p{N}])
# eye-mouth-eye faces ^_^  ^^  -_-  T_T  >_<  o.o
\^[_\-.oω]?\^+
(?<![\p{L}\p{N}])[\-ot;>][_.][\-ot;<](?![\p{L}\p{N}])

@literal orz
@literal otl
@literal m(_ _)m
@literal ¯\_(ツ)_/¯
@literal (╯°□°）╯︵ ┻━┻
@literal ┐(´д｀)┌
@literal \(^o^)/
)xlsent";

}  // namespace xlsent::detail

#endif  // XLSENT_DETAIL_EMOTICONS_V1_HPP

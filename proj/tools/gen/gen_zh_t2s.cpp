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

// Regenerates data/zh_t2s.tsv from ICU's Traditional-Simplified transliterator.
// Only single-codepoint to single-codepoint mappings are kept, and chains are
// collapsed so the table is idempotent.
#include <cstdio>
#include <map>
#include <memory>

#include <unicode/translit.h>
#include <unicode/unistr.h>

int main() {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::Transliterator> t2s(
        icu::Transliterator::createInstance("Traditional-Simplified", UTRANS_FORWARD, status));
    if (U_FAILURE(status)) {
        std::fprintf(stderr, "ICU transliterator unavailable: %s\n", u_errorName(status));
        return 1;
    }
    std::map<UChar32, UChar32> table;
    auto scan = [&](UChar32 lo, UChar32 hi) {
        for (UChar32 c = lo; c <= hi; ++c) {
            icu::UnicodeString s(c);
            t2s->transliterate(s);
            if (s.countChar32() == 1 && s.char32At(0) != c) table[c] = s.char32At(0);
        }
    };
    scan(0x3400, 0x4DBF);
    scan(0x4E00, 0x9FFF);
    scan(0xF900, 0xFAFF);
    scan(0x20000, 0x2A6DF);
    for (auto& [from, to] : table) {
        while (table.count(to) && table[to] != to) to = table[to];
    }
    std::printf("# Traditional to simplified Chinese, one codepoint per side.\n");
    std::printf("# Format: <hex codepoint>\\t<hex codepoint>. Generated by tools/gen/gen_zh_t2s.cpp.\n");
    std::printf("# version: 1\n");
    for (const auto& [from, to] : table) {
        if (from != to) std::printf("%04X\t%04X\n", static_cast<unsigned>(from), static_cast<unsigned>(to));
    }
    return 0;
}

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

#ifndef XLSENT_CONTEXT_HPP
#define XLSENT_CONTEXT_HPP

#include <bit>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/align.hpp"
#include "xlsent/embeddings.hpp"
#include "xlsent/error.hpp"

namespace xlsent {

inline std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Everything that decides which vector a (language, token) pair gets: one
/// table per language, an optional translation matrix per language, and the
/// OOV policy. Tables are shared, never copied.
class EmbeddingContext {
public:
    EmbeddingContext() = default;
    explicit EmbeddingContext(OovPolicy oov) : oov_(oov) {}

    void add_table(std::shared_ptr<const EmbeddingTable> table) {
        if (!table) throw ArgumentError("null embedding table");
        if (dim_ != 0 && table->dim() != dim_) {
            throw ConfigError("embedding table for '" + table->lang() + "' has dim " + std::to_string(table->dim()) +
                              ", expected " + std::to_string(dim_));
        }
        if (tables_.contains(table->lang())) throw ConfigError("two embedding tables for '" + table->lang() + "'");
        dim_ = table->dim();
        tables_.emplace(table->lang(), std::move(table));
    }
    void add_table(EmbeddingTable table) { add_table(std::make_shared<const EmbeddingTable>(std::move(table))); }

    /// Maps `tm.src_lang` vectors into `tm.tgt_lang` space.
    void set_alignment(TranslationMatrix tm) {
        if (!tables_.contains(tm.src_lang)) throw ConfigError("no embedding table for '" + tm.src_lang + "'");
        if (tm.dim() != dim_) {
            throw ConfigError("translation matrix " + tm.src_lang + "->" + tm.tgt_lang + " has side " +
                              std::to_string(tm.dim()) + ", embeddings have dim " + std::to_string(dim_));
        }
        maps_.insert_or_assign(tm.src_lang, std::move(tm));
    }
    void clear_alignment() { maps_.clear(); }

    /// Identifies the normalization that produced the tokens looked up here.
    void set_preprocess_fingerprint(std::string fp) { preprocess_fp_ = std::move(fp); }
    const std::string& preprocess_fingerprint() const noexcept { return preprocess_fp_; }

    std::size_t dim() const noexcept { return dim_; }
    const OovPolicy& oov_policy() const noexcept { return oov_; }
    const EmbeddingTable& table(const std::string& lang) const {
        const auto it = tables_.find(lang);
        if (it == tables_.end()) throw ConfigError("no embedding table for language '" + lang + "'");
        return *it->second;
    }
    bool has_table(const std::string& lang) const { return tables_.contains(lang); }
    const TranslationMatrix* alignment(const std::string& lang) const {
        const auto it = maps_.find(lang);
        return it == maps_.end() ? nullptr : &it->second;
    }
    std::vector<std::string> languages() const {
        std::vector<std::string> out;
        for (const auto& [l, t] : tables_) out.push_back(l);
        return out;
    }

    /// The space a language's vectors are expressed in after mapping.
    std::string space(const std::string& lang) const {
        const auto* tm = alignment(lang);
        return tm ? tm->tgt_lang : lang;
    }

    /// Table vector or OOV vector, then x^T W when the language is aligned.
    Eigen::VectorXd lookup(const std::string& lang, const std::string& token, OovCache& cache) const {
        const auto& t = table(lang);
        const auto* v = t.find(token);
        const Eigen::VectorXd& base = v ? *v : cache.get(lang, token, dim_);
        const auto* tm = alignment(lang);
        return tm ? Eigen::VectorXd(tm->W.transpose() * base) : base;
    }

    std::string embedding_fingerprint() const {
        std::uint64_t h = fnv1a("emb1");
        for (const auto& [lang, t] : tables_) h = fnv1a(hex64(t->content_hash()), fnv1a(lang, h));
        h = fnv1a(std::to_string(oov_.seed) + "/" + hex64(std::bit_cast<std::uint64_t>(oov_.scale)), h);
        return hex64(h);
    }

    std::string alignment_fingerprint() const {
        if (maps_.empty()) return "none";
        std::uint64_t h = fnv1a("align1");
        for (const auto& [lang, tm] : maps_) {
            h = fnv1a(tm.src_lang + ">" + tm.tgt_lang, h);
            h = fnv1a(std::string_view(reinterpret_cast<const char*>(tm.W.data()),
                                       sizeof(double) * static_cast<std::size_t>(tm.W.size())),
                      h);
        }
        return hex64(h);
    }

private:
    std::size_t dim_ = 0;
    OovPolicy oov_;
    std::string preprocess_fp_;
    std::map<std::string, std::shared_ptr<const EmbeddingTable>> tables_;
    std::map<std::string, TranslationMatrix> maps_;
};

/// Dense store of the (mapped) vectors of every token a model has seen, one
/// column per (language, token). Tweets become column-id sequences.
class TokenStore {
public:
    explicit TokenStore(std::size_t dim = 0) : dim_(dim) {}

    int intern(const std::string& lang, const std::string& token, const EmbeddingContext& ctx, OovCache& cache) {
        auto key = lang + '\0' + token;
        const auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        if (dim_ == 0) dim_ = ctx.dim();
        const int id = static_cast<int>(keys_.size());
        pending_.push_back(ctx.lookup(lang, token, cache));
        index_.emplace(key, id);
        keys_.push_back(std::move(key));
        return id;
    }

    /// Column id, or -1 when unseen.
    int find(const std::string& lang, const std::string& token) const {
        const auto it = index_.find(lang + '\0' + token);
        return it == index_.end() ? -1 : it->second;
    }

    /// All vectors as a dim x size matrix; interned vectors are appended lazily.
    Eigen::MatrixXd& matrix() {
        if (!pending_.empty()) {
            const auto old = E_.cols();
            E_.conservativeResize(static_cast<Eigen::Index>(dim_), old + static_cast<Eigen::Index>(pending_.size()));
            for (std::size_t i = 0; i < pending_.size(); ++i) E_.col(old + static_cast<Eigen::Index>(i)) = pending_[i];
            pending_.clear();
        }
        return E_;
    }

    std::size_t size() const noexcept { return keys_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    /// "lang\0token" keys by column.
    const std::vector<std::string>& keys() const noexcept { return keys_; }

private:
    std::size_t dim_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> keys_;
    std::vector<Eigen::VectorXd> pending_;
    Eigen::MatrixXd E_;
};

}  // namespace xlsent

#endif  // XLSENT_CONTEXT_HPP

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

#ifndef XLSENT_NN_TRAIN_HPP
#define XLSENT_NN_TRAIN_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/context.hpp"
#include "xlsent/error.hpp"
#include "xlsent/nn/network.hpp"
#include "xlsent/preprocess.hpp"

namespace xlsent::nn {

struct TrainConfig {
    std::size_t batch_size = 50;
    double dropout = 0.5;
    AdadeltaOptions adadelta;
    std::size_t max_epochs = 25;
    std::size_t patience = 5;
    std::uint64_t seed = 0;
    /// Update the word vectors too (off: vectors are fixed inputs).
    bool finetune = false;
    /// LSTM hidden size; 0 means the embedding dimension.
    std::size_t hidden = 0;
    Activation candidate = Activation::tanh;
    double forget_bias = 1.0;
    std::vector<Eigen::Index> windows{3, 4, 5};
    std::size_t filters = 100;
    Activation activation = Activation::tanh;

    void validate() const {
        if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
        if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
        if (!(adadelta.rho > 0.0 && adadelta.rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
        if (!(adadelta.eps > 0.0)) throw ConfigError("eps must be positive");
        if (max_epochs == 0) throw ConfigError("max_epochs must be at least 1");
        if (windows.empty() || filters == 0) throw ConfigError("CNN needs at least one window and filter");
        for (auto w : windows) {
            if (w <= 0) throw ConfigError("window sizes must be positive");
        }
    }

    /// Sets one hyperparameter from its key=value spelling; returns false for unknown keys.
    bool set(const std::string& key, const std::string& value) {
        auto to_size = [&](std::size_t& out) {
            const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc() || p != value.data() + value.size()) {
                throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
            }
        };
        auto to_double = [&](double& out) {
            if (!xlsent::detail::parse_double(value, out)) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
        };
        auto to_bool = [&](bool& out) {
            if (value == "true" || value == "1") out = true;
            else if (value == "false" || value == "0") out = false;
            else throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
        };
        auto to_act = [&](Activation& out) {
            const auto a = parse_activation(value);
            if (!a) throw ConfigError("'" + key + "' expects tanh, sigmoid or relu, got '" + value + "'");
            out = *a;
        };
        if (key == "batch_size") to_size(batch_size);
        else if (key == "dropout") to_double(dropout);
        else if (key == "rho") to_double(adadelta.rho);
        else if (key == "eps") to_double(adadelta.eps);
        else if (key == "max_epochs") to_size(max_epochs);
        else if (key == "patience") to_size(patience);
        else if (key == "seed") {
            std::size_t s = 0;
            to_size(s);
            seed = s;
        } else if (key == "finetune") to_bool(finetune);
        else if (key == "hidden") to_size(hidden);
        else if (key == "candidate") to_act(candidate);
        else if (key == "forget_bias") to_double(forget_bias);
        else if (key == "filters") to_size(filters);
        else if (key == "activation") to_act(activation);
        else if (key == "windows") {
            windows.clear();
            std::stringstream ss(value);
            std::string part;
            while (std::getline(ss, part, ',')) {
                std::size_t w = 0;
                const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), w);
                if (ec != std::errc() || p != part.data() + part.size() || w == 0) {
                    throw ConfigError("'windows' expects a comma-separated list of positive integers");
                }
                windows.push_back(static_cast<Eigen::Index>(w));
            }
        } else {
            return false;
        }
        return true;
    }

    std::vector<std::pair<std::string, std::string>> entries() const {
        auto num = [](double x) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return std::string(buf);
        };
        std::string ws;
        for (std::size_t i = 0; i < windows.size(); ++i) ws += (i ? "," : "") + std::to_string(windows[i]);
        return {{"batch_size", std::to_string(batch_size)},
                {"dropout", num(dropout)},
                {"rho", num(adadelta.rho)},
                {"eps", num(adadelta.eps)},
                {"max_epochs", std::to_string(max_epochs)},
                {"patience", std::to_string(patience)},
                {"seed", std::to_string(seed)},
                {"finetune", finetune ? "true" : "false"},
                {"hidden", std::to_string(hidden)},
                {"candidate", to_string(candidate)},
                {"forget_bias", num(forget_bias)},
                {"windows", ws},
                {"filters", std::to_string(filters)},
                {"activation", to_string(activation)}};
    }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double dev_accuracy = 0.0;
    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct Fingerprints {
    std::string preprocess;
    std::string embedding;
    std::string alignment;
    friend bool operator==(const Fingerprints&, const Fingerprints&) = default;

    static Fingerprints of(const EmbeddingContext& ctx) {
        return {ctx.preprocess_fingerprint(), ctx.embedding_fingerprint(), ctx.alignment_fingerprint()};
    }
};

struct TrainedModel {
    ModelKind kind = ModelKind::cnn;
    TrainConfig config;
    Network net;
    /// Padded length used for CNN inputs (longer tweets are padded to their own length).
    Eigen::Index max_len = 0;
    Fingerprints fingerprints;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    /// Fine-tuned word vectors keyed "lang\0token"; empty unless config.finetune.
    std::unordered_map<std::string, Eigen::VectorXd> tuned;
};

inline Network make_network(ModelKind kind, Eigen::Index dim, const TrainConfig& cfg) {
    Rng rng = Rng::stream(cfg.seed, 0x1A17);
    if (kind == ModelKind::lstm) {
        const auto hidden = cfg.hidden ? static_cast<Eigen::Index>(cfg.hidden) : dim;
        LstmParams p({dim, hidden, static_cast<Eigen::Index>(kNumClasses), cfg.candidate});
        p.initialize(rng, cfg.forget_bias);
        return Network(std::move(p));
    }
    CnnParams p({dim, cfg.windows, static_cast<Eigen::Index>(cfg.filters), static_cast<Eigen::Index>(kNumClasses),
                 cfg.activation});
    p.initialize(rng);
    return Network(std::move(p));
}

namespace detail {

struct Encoded {
    std::vector<int> ids;
    Polarity label;
};

inline Sample materialize(const Encoded& e, const Eigen::MatrixXd& E, Eigen::Index pad_to) {
    const auto n = static_cast<Eigen::Index>(e.ids.size());
    Sample s{{Eigen::MatrixXd::Zero(E.rows(), std::max(n, pad_to)), n}, e.label};
    for (Eigen::Index t = 0; t < n; ++t) s.input.X.col(t) = E.col(e.ids[static_cast<std::size_t>(t)]);
    return s;
}

inline double accuracy_of(const Network& net, const std::vector<Encoded>& data, const Eigen::MatrixXd& E,
                          Eigen::Index pad_to) {
    std::size_t hit = 0;
    for (const auto& e : data) {
        const auto s = materialize(e, E, pad_to);
        if (argmax_polarity(net.logits(s.input)) == e.label) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(data.size());
}

}  // namespace detail

/// Optional observer called after each epoch.
using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adadelta with dropout and early stopping on dev accuracy. One
/// parameter set serves every language in the data.
inline TrainedModel train(ModelKind kind, const std::vector<TokenizedTweet>& train_set,
                          const std::vector<TokenizedTweet>& dev_set, const EmbeddingContext& ctx,
                          const TrainConfig& cfg, const EpochCallback& on_epoch = {}) {
    cfg.validate();
    if (train_set.empty()) throw ArgumentError("training set is empty");
    if (dev_set.empty()) throw ArgumentError("dev set is empty");
    if (ctx.dim() == 0) throw ConfigError("no embedding tables loaded");

    OovCache cache(ctx.oov_policy());
    TokenStore store(ctx.dim());
    auto encode = [&](const std::vector<TokenizedTweet>& in) {
        std::vector<detail::Encoded> out;
        out.reserve(in.size());
        for (const auto& t : in) {
            if (t.tokens.empty()) throw ArgumentError("tweet '" + t.id + "' has no tokens");
            detail::Encoded e{{}, t.label};
            for (const auto& tok : t.tokens) e.ids.push_back(store.intern(t.lang, tok, ctx, cache));
            out.push_back(std::move(e));
        }
        return out;
    };
    const auto train_data = encode(train_set);
    const auto dev_data = encode(dev_set);
    Eigen::MatrixXd& E = store.matrix();

    TrainedModel model;
    model.kind = kind;
    model.config = cfg;
    model.fingerprints = Fingerprints::of(ctx);
    model.net = make_network(kind, static_cast<Eigen::Index>(ctx.dim()), cfg);
    Eigen::Index longest = 0;
    for (const auto* set : {&train_data, &dev_data}) {
        for (const auto& e : *set) longest = std::max(longest, static_cast<Eigen::Index>(e.ids.size()));
    }
    model.max_len = std::max(longest, model.net.min_len());
    const Eigen::Index pad_to = kind == ModelKind::cnn ? model.max_len : 0;

    AdadeltaState state(model.net.params().size());
    AdadeltaState embed_state(cfg.finetune ? static_cast<std::size_t>(E.size()) : 0);
    ParamSet best_params = model.net.params();
    Eigen::MatrixXd best_E = cfg.finetune ? E : Eigen::MatrixXd();
    double best_acc = -1.0;
    std::size_t since_best = 0;
    std::uint64_t batch_counter = 0;
    const std::uint64_t dropout_seed = derive_seed(cfg.seed, 0xD509);

    std::vector<std::size_t> order(train_data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        Rng::stream(cfg.seed, 0xE90C00 + epoch).shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const auto end = std::min(order.size(), start + cfg.batch_size);
            std::vector<Sample> batch;
            batch.reserve(end - start);
            for (auto i = start; i < end; ++i) batch.push_back(detail::materialize(train_data[order[i]], E, pad_to));
            auto lg = loss_and_gradients(model.net, batch, cfg.dropout, derive_seed(dropout_seed, batch_counter++),
                                         cfg.finetune);
            loss_sum += lg.loss * static_cast<double>(end - start);
            adadelta_step(model.net.params(), lg.grads, state, cfg.adadelta);
            if (cfg.finetune) {
                Eigen::MatrixXd dE = Eigen::MatrixXd::Zero(E.rows(), E.cols());
                for (auto i = start; i < end; ++i) {
                    const auto& ids = train_data[order[i]].ids;
                    const auto& dX = lg.input_grads[i - start];
                    for (std::size_t t = 0; t < ids.size(); ++t) dE.col(ids[t]) += dX.col(static_cast<Eigen::Index>(t));
                }
                adadelta_step(std::span<double>(E.data(), static_cast<std::size_t>(E.size())),
                              std::span<const double>(dE.data(), static_cast<std::size_t>(dE.size())), embed_state,
                              cfg.adadelta);
            }
        }
        EpochRecord rec{epoch, loss_sum / static_cast<double>(order.size()),
                        detail::accuracy_of(model.net, dev_data, E, pad_to)};
        model.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
        if (!model.net.params().all_finite()) throw Error("training diverged: non-finite parameters");
        if (rec.dev_accuracy > best_acc) {
            best_acc = rec.dev_accuracy;
            best_params = model.net.params();
            if (cfg.finetune) best_E = E;
            model.best_epoch = epoch;
            since_best = 0;
        } else {
            ++since_best;
        }
        if (since_best >= cfg.patience) break;
    }
    model.net.params() = best_params;
    if (cfg.finetune) {
        for (std::size_t i = 0; i < store.size(); ++i) {
            model.tuned.emplace(store.keys()[i], best_E.col(static_cast<Eigen::Index>(i)));
        }
    }
    return model;
}

struct Prediction {
    Polarity label = Polarity::positive;
    Eigen::VectorXd probs;
};

inline void check_fingerprints(const TrainedModel& model, const EmbeddingContext& ctx) {
    const auto fp = Fingerprints::of(ctx);
    auto mismatch = [](const char* what, const std::string& a, const std::string& b) {
        throw ConfigError(std::string(what) + " fingerprint mismatch: model " + a + ", context " + b);
    };
    if (fp.preprocess != model.fingerprints.preprocess) mismatch("preprocessing", model.fingerprints.preprocess, fp.preprocess);
    if (fp.embedding != model.fingerprints.embedding) mismatch("embedding", model.fingerprints.embedding, fp.embedding);
    if (fp.alignment != model.fingerprints.alignment) mismatch("alignment", model.fingerprints.alignment, fp.alignment);
}

/// Token matrix of one tweet as the model sees it (tuned vectors first).
inline PaddedTweetMatrix model_input(const TrainedModel& model, const TokenizedTweet& tweet,
                                     const EmbeddingContext& ctx, OovCache& cache) {
    if (tweet.tokens.empty()) throw ArgumentError("tweet '" + tweet.id + "' has no tokens");
    const auto n = static_cast<Eigen::Index>(tweet.tokens.size());
    const Eigen::Index pad_to = model.kind == ModelKind::cnn ? std::max(n, model.max_len) : n;
    PaddedTweetMatrix in{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ctx.dim()), pad_to), n};
    for (Eigen::Index t = 0; t < n; ++t) {
        const auto& tok = tweet.tokens[static_cast<std::size_t>(t)];
        if (!model.tuned.empty()) {
            const auto it = model.tuned.find(tweet.lang + '\0' + tok);
            if (it != model.tuned.end()) {
                in.X.col(t) = it->second;
                continue;
            }
        }
        in.X.col(t) = ctx.lookup(tweet.lang, tok, cache);
    }
    return in;
}

/// Class probabilities with dropout off; ties go to the lowest label code.
inline std::vector<Prediction> predict(const TrainedModel& model, const std::vector<TokenizedTweet>& tweets,
                                       const EmbeddingContext& ctx) {
    check_fingerprints(model, ctx);
    OovCache cache(ctx.oov_policy());
    std::vector<Prediction> out;
    out.reserve(tweets.size());
    for (const auto& t : tweets) {
        Prediction p;
        p.probs = softmax(model.net.logits(model_input(model, t, ctx, cache)));
        p.label = argmax_polarity(p.probs);
        out.push_back(std::move(p));
    }
    return out;
}

inline Prediction predict(const TrainedModel& model, const TokenizedTweet& tweet, const EmbeddingContext& ctx) {
    return predict(model, std::vector<TokenizedTweet>{tweet}, ctx).front();
}

// ---------------------------------------------------------------------------
// Checkpoint text format:
//   xlsent-model 1
//   kind <lstm|cnn>
//   dim <d>
//   max_len <n>
//   best_epoch <e>
//   fingerprint <preprocess|embedding|alignment> <value>   (three lines)
//   config <key> <value>                                    (one per key)
//   history <epoch> <train_loss> <dev_accuracy>             (one per epoch)
//   block <name> <rows> <cols>, then rows lines of cols reals (row-major)
//   tuned <count>, then count lines "<lang> <token> v1 ... vd"
//   end

namespace detail {

inline std::string real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline void write_model(std::ostream& os, const TrainedModel& m) {
    os << "xlsent-model 1\nkind " << to_string(m.kind) << "\ndim " << m.net.input_dim() << "\nmax_len " << m.max_len
       << "\nbest_epoch " << m.best_epoch << '\n';
    os << "fingerprint preprocess " << (m.fingerprints.preprocess.empty() ? "-" : m.fingerprints.preprocess) << '\n'
       << "fingerprint embedding " << m.fingerprints.embedding << '\n'
       << "fingerprint alignment " << m.fingerprints.alignment << '\n';
    for (const auto& [k, v] : m.config.entries()) os << "config " << k << ' ' << v << '\n';
    for (const auto& h : m.history) {
        os << "history " << h.epoch << ' ' << detail::real(h.train_loss) << ' ' << detail::real(h.dev_accuracy) << '\n';
    }
    const auto& P = m.net.params();
    for (std::size_t b = 0; b < P.blocks().size(); ++b) {
        const auto& blk = P.blocks()[b];
        os << "block " << blk.name << ' ' << blk.rows << ' ' << blk.cols << '\n';
        const auto M = P.mat(b);
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? " " : "") << detail::real(M(i, j));
            os << '\n';
        }
    }
    std::vector<std::string> keys;
    for (const auto& [k, v] : m.tuned) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    os << "tuned " << keys.size() << '\n';
    for (const auto& k : keys) {
        const auto nul = k.find('\0');
        os << k.substr(0, nul) << ' ' << k.substr(nul + 1);
        for (double x : m.tuned.at(k)) os << ' ' << detail::real(x);
        os << '\n';
    }
    os << "end\n";
}

inline TrainedModel read_model(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::vector<std::string> {
        if (!std::getline(in, line)) throw ParseError("unexpected end of model file", lineno + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> out;
        for (auto f : xlsent::detail::split_spaces(line)) out.emplace_back(f);
        return out;
    };
    auto expect = [&](const std::string& key, std::size_t arity) {
        auto f = next();
        if (f.size() != arity + 1 || f[0] != key) throw ParseError("expected '" + key + "'", lineno);
        return f;
    };
    auto to_int = [&](const std::string& s) {
        long long v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < 0) throw ParseError("bad integer '" + s + "'", lineno);
        return static_cast<std::size_t>(v);
    };
    auto to_real = [&](const std::string& s) {
        double v = 0;
        if (!xlsent::detail::parse_double(s, v)) throw ParseError("bad number '" + s + "'", lineno);
        return v;
    };

    if (next() != std::vector<std::string>{"xlsent-model", "1"}) throw ParseError("not an xlsent model file", 1);
    TrainedModel m;
    const auto kind = parse_model_kind(expect("kind", 1)[1]);
    if (!kind) throw ParseError("unknown model kind", lineno);
    m.kind = *kind;
    const auto dim = static_cast<Eigen::Index>(to_int(expect("dim", 1)[1]));
    m.max_len = static_cast<Eigen::Index>(to_int(expect("max_len", 1)[1]));
    m.best_epoch = to_int(expect("best_epoch", 1)[1]);
    for (auto* fp : {&m.fingerprints.preprocess, &m.fingerprints.embedding, &m.fingerprints.alignment}) {
        const auto f = expect("fingerprint", 2);
        *fp = f[2] == "-" ? "" : f[2];
    }
    auto f = next();
    while (!f.empty() && f[0] == "config") {
        if (f.size() != 3 || !m.config.set(f[1], f[2])) throw ParseError("bad config line", lineno);
        f = next();
    }
    while (!f.empty() && f[0] == "history") {
        if (f.size() != 4) throw ParseError("bad history line", lineno);
        m.history.push_back({to_int(f[1]), to_real(f[2]), to_real(f[3])});
        f = next();
    }
    m.net = make_network(m.kind, dim, m.config);
    auto& P = m.net.params();
    for (std::size_t b = 0; b < P.blocks().size(); ++b) {
        const auto& blk = P.blocks()[b];
        if (f.size() != 4 || f[0] != "block" || f[1] != blk.name || to_int(f[2]) != static_cast<std::size_t>(blk.rows) ||
            to_int(f[3]) != static_cast<std::size_t>(blk.cols)) {
            throw ParseError("expected block " + blk.name, lineno);
        }
        auto M = P.mat(b);
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const auto row = next();
            if (row.size() != static_cast<std::size_t>(M.cols())) throw ParseError("wrong row width", lineno);
            for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = to_real(row[static_cast<std::size_t>(j)]);
        }
        f = next();
    }
    if (f.size() != 2 || f[0] != "tuned") throw ParseError("expected 'tuned'", lineno);
    const auto n_tuned = to_int(f[1]);
    for (std::size_t i = 0; i < n_tuned; ++i) {
        const auto row = next();
        if (row.size() != static_cast<std::size_t>(dim) + 2) throw ParseError("wrong tuned row width", lineno);
        Eigen::VectorXd v(dim);
        for (Eigen::Index k = 0; k < dim; ++k) v[k] = to_real(row[static_cast<std::size_t>(k) + 2]);
        m.tuned.emplace(row[0] + '\0' + row[1], std::move(v));
    }
    if (next() != std::vector<std::string>{"end"}) throw ParseError("expected 'end'", lineno);
    return m;
}

inline void save_model(const std::string& path, const TrainedModel& m) {
    std::ofstream os(path);
    if (!os) throw ArgumentError("cannot write model '" + path + "'");
    write_model(os, m);
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open model '" + path + "'");
    return read_model(in);
}

/// CSV with header "epoch,train_loss,dev_accuracy".
inline void write_training_log(std::ostream& os, const std::vector<EpochRecord>& history) {
    os << "epoch,train_loss,dev_accuracy\n";
    for (const auto& h : history) {
        os << h.epoch << ',' << detail::real(h.train_loss) << ',' << detail::real(h.dev_accuracy) << '\n';
    }
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_TRAIN_HPP

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

#ifndef XLSENT_ERROR_HPP
#define XLSENT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlsent {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input; `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates the closed label/language schema.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Bilingual dictionary does not cover enough pivot words.
class CoverageError : public Error {
public:
    CoverageError(const std::string& what, std::size_t shortfall)
        : Error(what), shortfall_(shortfall) {}
    std::size_t shortfall() const noexcept { return shortfall_; }

private:
    std::size_t shortfall_;
};

/// A record that produced no tokens after normalization.
class DropError : public Error {
public:
    explicit DropError(std::string record_id)
        : Error("record '" + record_id + "' is empty after normalization"),
          record_id_(std::move(record_id)) {}
    const std::string& record_id() const noexcept { return record_id_; }

private:
    std::string record_id_;
};

/// A held-out record was consulted while building training artifacts.
class LeakageError : public Error {
public:
    using Error::Error;
};

}  // namespace xlsent

#endif  // XLSENT_ERROR_HPP

// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMOGEN_ERROR_HPP
#define MIMOGEN_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mimogen
{

// Root of every error the library raises on purpose. Anything else escaping
// the library (bad_alloc aside) is a bug.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Bad key=value input or override; message names the offending field.
class ConfigError : public Error
{
public:
    using Error::Error;
};

// Parameter set violates an invariant (e.g. num_paths = 0).
class ValidationError : public Error
{
public:
    using Error::Error;
};

// Index or label outside its valid range; message reports the range.
class BoundsError : public Error
{
public:
    using Error::Error;
};

// Unknown identifier (e.g. a base station id not in the scene).
class LookupError : public Error
{
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error
{
public:
    using Error::Error;
};

// Vector/matrix dimensions do not agree.
class DimensionError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

// Wrong magic number or otherwise unrecognisable container.
class FormatError : public Error
{
public:
    using Error::Error;
};

class UnsupportedVersionError : public Error
{
public:
    UnsupportedVersionError(const std::string &what, std::uint32_t version)
        : Error(what), version_(version) {}
    std::uint32_t version() const noexcept { return version_; }

private:
    std::uint32_t version_;
};

// Byte stream ended early or carries bytes past the declared content.
class CorruptionError : public Error
{
public:
    CorruptionError(const std::string &what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Structurally well-formed data that breaks a semantic rule.
class SemanticError : public Error
{
public:
    SemanticError(const std::string &what, std::size_t record)
        : Error(what), record_(record) {}
    std::size_t record() const noexcept { return record_; }

private:
    std::size_t record_;
};

// Inputs that disagree with each other (e.g. scenario names across ray files).
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

// A required input artifact is absent.
class MissingInputError : public Error
{
public:
    MissingInputError(const std::string &what, std::uint32_t bs_id)
        : Error(what), bs_id_(bs_id) {}
    std::uint32_t bs_id() const noexcept { return bs_id_; }

private:
    std::uint32_t bs_id_;
};

} // namespace mimogen

#endif // MIMOGEN_ERROR_HPP

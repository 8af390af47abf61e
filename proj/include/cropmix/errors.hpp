// Copyright (c) 2026, The cropmix Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CROPMIX_ERRORS_HPP_INCLUDED
#define CROPMIX_ERRORS_HPP_INCLUDED

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cropmix {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Two tensors that must agree in shape do not.
class ShapeError : public Error {
public:
  using Error::Error;
};

class BoundsError : public Error {
public:
  using Error::Error;
};

/// Malformed raw tensor stream (bad magic, bad dims).
class FormatError : public Error {
public:
  using Error::Error;
};

class UnsupportedVersionError : public FormatError {
public:
  UnsupportedVersionError(unsigned version)
      : FormatError("unsupported raw tensor version " +
                    std::to_string(version) + " (expected 1)"),
        version_(version) {}
  unsigned version() const noexcept { return version_; }

private:
  unsigned version_;
};

class TruncationError : public FormatError {
public:
  TruncationError(std::size_t expected, std::size_t actual)
      : FormatError("truncated raw tensor payload: expected " +
                    std::to_string(expected) + " bytes, got " +
                    std::to_string(actual)),
        expected_(expected), actual_(actual) {}
  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

private:
  std::size_t expected_;
  std::size_t actual_;
};

/// A pixel value is non-finite or outside [0, 1].
class DataRangeError : public Error {
public:
  DataRangeError(std::size_t index, float value)
      : Error("value " + std::to_string(value) + " at index " +
              std::to_string(index) + " is outside [0, 1]"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class IoError : public Error {
public:
  using Error::Error;
};

class DecodeError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// A recorded plan cannot be replayed against the given source/config.
class ReplayError : public Error {
public:
  using Error::Error;
};

} // namespace cropmix

#endif // CROPMIX_ERRORS_HPP_INCLUDED

// Copyright 2026 The hflc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hflc {

// Base of every error thrown by the library. exit_code() follows the CLI
// convention: 1 usage/validation, 2 I/O, 3 numerical failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed wiring: a controller references a signal nobody produces.
class WiringError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (CSV, config, model file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Target outside the leg's reach.
class Unreachable : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

// All firing strengths vanished or were non-finite.
class DegenerateFiring : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Training loss or a chain signal went non-finite.
class Divergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Runs f(), re-throwing any library error with `context` prepended while
// keeping its category (and so its exit code).
template <class F>
auto with_context(const std::string& context, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const RankDeficient& e) {
    throw RankDeficient(context + ": " + e.what());
  } catch (const Divergence& e) {
    throw Divergence(context + ": " + e.what());
  } catch (const DegenerateFiring& e) {
    throw DegenerateFiring(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const WiringError& e) {
    throw WiringError(context + ": " + e.what());
  } catch (const Unreachable& e) {
    throw Unreachable(context + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(context + ": " + e.what());
  } catch (const Error& e) {
    throw InvalidArgument(context + ": " + e.what());
  }
}

}  // namespace hflc

// Copyright 2026 The Chanprune Authors.
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

#ifndef CHANPRUNE_ERROR_H_
#define CHANPRUNE_ERROR_H_

#include <stdexcept>
#include <string>

namespace chanprune {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed architecture documents, step files and structure vectors that do
// not fit the architecture or space they are used with.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Raised by rescale when every coordinate sits at its minimum and the
// sparsity targets still do not hold.
class MinimumReached : public Error {
 public:
  using Error::Error;
};

class EvaluatorError : public Error {
 public:
  using Error::Error;
};

// Connection refused, peer closed the stream, write failure.
class TransportError : public EvaluatorError {
 public:
  using EvaluatorError::EvaluatorError;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

// The peer sent something that is not a valid protocol message.
class ProtocolError : public EvaluatorError {
 public:
  using EvaluatorError::EvaluatorError;
};

}  // namespace chanprune

#endif  // CHANPRUNE_ERROR_H_

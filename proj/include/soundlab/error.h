// Copyright 2026 The Soundlab Authors. All rights reserved.
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

#ifndef SOUNDLAB_ERROR_H_
#define SOUNDLAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace soundlab {

// Base of every error the library raises. The CLI maps UsageError to exit
// code 2 and everything else to exit code 1.
class SoundlabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tree, enumeration or response-game expansion exceeded its node budget.
class BudgetExceededError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

// A strategy has no entry for an information state that was needed.
class MissingStrategyError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

// A parameter was outside its admissible range.
class RangeError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

// A tabularization query order is not a valid permutation.
class OrderError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

class NonConvergenceError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

// Importance weights underflowed or another numerical guard tripped.
class NumericalError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

// An algorithm's initial state support cannot be enumerated exactly.
class NondeterminismError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

class UsageError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

class ParseError : public SoundlabError {
 public:
  using SoundlabError::SoundlabError;
};

}  // namespace soundlab

#endif  // SOUNDLAB_ERROR_H_

// Copyright 2026 The lexnoise Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXNOISE_ERROR_HPP_
#define LEXNOISE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lexnoise {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, records, signals).
class DataError : public Error {
 public:
  using Error::Error;

  DataError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what) {}
};

class OutOfVocabularyError : public DataError {
 public:
  explicit OutOfVocabularyError(const std::string& word)
      : DataError("out-of-vocabulary word: '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class FormatVersionError : public DataError {
 public:
  using DataError::DataError;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexnoise

#endif  // LEXNOISE_ERROR_HPP_

// Copyright 2026 The JDOT Authors
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

#ifndef JDOT_TYPES_HPP_
#define JDOT_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jdot {

// Row-major so that one sample is one contiguous row, matching the CSV and
// C API buffer layouts.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Task { kRegression, kClassification };

const char* TaskName(Task task);
Task ParseTask(const std::string& name);

// Base of every error thrown by the library. The subclasses map one-to-one
// onto the C API status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something that violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data files.
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace jdot

#endif  // JDOT_TYPES_HPP_

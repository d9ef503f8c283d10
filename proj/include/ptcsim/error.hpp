// Copyright 2026 The ptcsim Authors. All Rights Reserved.
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

#ifndef PTCSIM_ERROR_HPP
#define PTCSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ptc
{

// Root of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a formula (non-positive length, K < 2, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

// Catalog or config document does not match its schema.
class SchemaError : public Error
{
public:
    using Error::Error;
};

// A referenced file does not exist.
class NotFoundError : public Error
{
public:
    using Error::Error;
};

// Document parses but a physical invariant is violated.
class ValidationError : public Error
{
public:
    using Error::Error;
};

// Table lookup outside the tabulated set.
class LookupError : public Error
{
public:
    using Error::Error;
};

// Tensor shapes disagree.
class ShapeError : public Error
{
public:
    using Error::Error;
};

// Value outside the encodable range of a modulator or converter.
class RangeError : public Error
{
public:
    using Error::Error;
};

// Integrator driven past its readout epoch; always a scheduler bug.
class SchedulingError : public Error
{
public:
    using Error::Error;
};

// Integrator capacitance too small for the aggregated photocurrent.
class SizingError : public Error
{
public:
    using Error::Error;
};

// Training diverged.
class TrainingError : public Error
{
public:
    using Error::Error;
};

} // namespace ptc

#endif

// Copyright 2026 The shadowkit Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace shadowkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation received an image with an unsupported channel count.
class ChannelError : public Error {
public:
    using Error::Error;
};

/// Two rasters that must agree in size do not.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Singular or rank-deficient geometry.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// RANSAC could not find a model supported by at least four matches.
class NoConsensusError : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// Out-of-range parameters or malformed user input.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// File could not be read, decoded or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace shadowkit

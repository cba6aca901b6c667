// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace smoe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on caller-supplied values was violated (bad shape, out-of-range parameter, parse failure).
class InputError : public Error {
public:
    using Error::Error;
};

/// The request is well formed but exceeds what an exhaustive routine can enumerate.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A verification routine could not set up its own preconditions (e.g. no kink-free batch).
class CheckError : public Error {
public:
    using Error::Error;
};

}  // namespace smoe

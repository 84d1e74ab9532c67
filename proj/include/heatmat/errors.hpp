// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace heatmat {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class UnknownMaterialError : public Error {
public:
    using Error::Error;
};

class DegenerateInterfaceError : public Error {
public:
    using Error::Error;
};

class PackingError : public Error {
public:
    using Error::Error;
};

class CompositionError : public Error {
public:
    using Error::Error;
};

/// Geometry that cannot be encoded at the requested grid resolution.
class EncodeError : public Error {
public:
    using Error::Error;
};

/// Malformed, truncated or mismatched container file.
class FormatError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class OffFacadeError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace heatmat

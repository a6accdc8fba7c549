// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hazpipe {

/// Base class for all hazpipe errors. CLI subcommands catch this and emit
/// stage-tagged diagnostics.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// geometry
class DegenerateInput : public Error { public: using Error::Error; };
class InvalidFraction : public Error { public: using Error::Error; };
class EmptyMask : public Error { public: using Error::Error; };

// feeder
class InvalidFps : public Error { public: using Error::Error; };
class EmptyTrace : public Error { public: using Error::Error; };

// detector
class DetectorUnavailable : public Error { public: using Error::Error; };
class MalformedResponse : public Error { public: using Error::Error; };

class ParseError : public Error {
public:
    ParseError(const std::string& message, long line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// segmentation
class DegenerateBox : public Error { public: using Error::Error; };
class InsufficientSamples : public Error { public: using Error::Error; };

// metrics
class InconsistentIds : public Error { public: using Error::Error; };

// dataset
class XmlError : public Error { public: using Error::Error; };
class OutOfBoundsBox : public Error { public: using Error::Error; };
class EmptySet : public Error { public: using Error::Error; };

class UnknownClass : public Error {
public:
    explicit UnknownClass(const std::string& name)
        : Error("unknown class name: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// eventlog
class SinkClosed : public Error { public: using Error::Error; };
class IoFailure : public Error { public: using Error::Error; };

}  // namespace hazpipe

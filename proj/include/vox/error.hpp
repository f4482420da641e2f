// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vox {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File-level failures. The CLI maps these to exit code 3.
class IoError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class LengthError : public Error { using Error::Error; };

// Signal-processing contract violations. The CLI maps these to exit code 4.
class DspError : public Error { using Error::Error; };
class DomainError : public DspError { using DspError::DspError; };
class BoundsError : public DspError { using DspError::DspError; };
class RangeError : public DspError { using DspError::DspError; };
class ConfigError : public DspError { using DspError::DspError; };
class TypeError : public DspError { using DspError::DspError; };

}  // namespace vox

#pragma once

#include <stdexcept>
#include <string>

namespace stc {

// Base class for all library errors. Subtypes map onto the CLI exit codes:
// config -> 2, data -> 3, protocol/codec -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

class FormatError : public DataError {
public:
    explicit FormatError(const std::string& what) : DataError(what) {}
};

class PartitionError : public DataError {
public:
    explicit PartitionError(const std::string& what) : DataError(what) {}
};

class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& what) : Error(what) {}
};

class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error(what) {}
};

} // namespace stc

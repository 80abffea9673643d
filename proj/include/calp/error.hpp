#pragma once

#include <stdexcept>
#include <string>

namespace calp {

/// Base of all errors raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An event mentions an element outside its frame, or an unknown domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured size cap (ground rules, worlds) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Program cannot be evaluated two-valued (negative dependency cycle).
class StratificationError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

} // namespace calp

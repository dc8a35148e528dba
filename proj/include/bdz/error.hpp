#pragma once

#include <stdexcept>
#include <string>

namespace bdz {

// Caller passed a value outside the operation's domain (non-dyadic string,
// n = 0, bad vertex id, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Level strings or a graph violate the structural rules they must obey.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A codeword could not be parsed. The message names the failing section.
class CorruptInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bdz

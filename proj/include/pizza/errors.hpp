#pragma once

#include <stdexcept>
#include <string>

namespace pizza {

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes (parse, domain and unsupported -> 2, resource -> 3, everything else -> 1).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnboundedError : public Error {
public:
    using Error::Error;
};

// A mathematical precondition of a theorem-level operation does not hold
// (e.g. -id not in W, hull of the orbit not inside K).
class HypothesisError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace pizza

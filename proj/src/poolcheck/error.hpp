#pragma once

#include <stdexcept>
#include <string>

namespace poolcheck {

// Explicit expansions fail loudly when they would exceed the configured ceiling.
class SizeGuardError : public std::runtime_error {
public:
    explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class AlphabetError : public std::runtime_error {
public:
    explicit AlphabetError(const std::string& what) : std::runtime_error(what) {}
};

class ArityError : public std::runtime_error {
public:
    explicit ArityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace poolcheck

#pragma once

#include <stdexcept>
#include <string>

namespace recip {

// Exit-code taxonomy shared by the library and the CLI:
// validation -> 1, numerical degeneracy -> 2, I/O or schema -> 3.

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& msg, std::string path_in_document = "")
        : std::runtime_error(msg), path(std::move(path_in_document)) {}

    // JSON-pointer-like location of the offending value, empty if not applicable.
    std::string path;
};

}  // namespace recip

#pragma once

#include <stdexcept>
#include <string>

namespace pfg {

enum class ErrorKind {
    Syntax,
    DuplicateLabel,
    Unresolved,
    Model,
    Usage,
    Io,
};

struct SourceLoc {
    int line = 0;
    int column = 0;
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourceLoc loc = {})
        : std::runtime_error(format(message, loc)), kind_(kind), loc_(loc) {}

    ErrorKind kind() const noexcept { return kind_; }
    SourceLoc loc() const noexcept { return loc_; }

private:
    static std::string format(const std::string& message, SourceLoc loc) {
        if (loc.line <= 0) return message;
        return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message;
    }

    ErrorKind kind_;
    SourceLoc loc_;
};

}  // namespace pfg

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfota {

// Base of every library error. kind() is the stable class name reported by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CFOTA_DEFINE_ERROR(Name)                                                   \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(#Name, what) {}             \
    }

CFOTA_DEFINE_ERROR(NotPerfectSquare);
CFOTA_DEFINE_ERROR(TooManyGroups);
CFOTA_DEFINE_ERROR(NotPsd);
CFOTA_DEFINE_ERROR(PilotShortage);
CFOTA_DEFINE_ERROR(DegenerateVariance);
CFOTA_DEFINE_ERROR(ShapeMismatch);
CFOTA_DEFINE_ERROR(InvalidConstants);
CFOTA_DEFINE_ERROR(ValidationError);
CFOTA_DEFINE_ERROR(BadMagic);
CFOTA_DEFINE_ERROR(TruncatedFile);
CFOTA_DEFINE_ERROR(LabelOutOfRange);
CFOTA_DEFINE_ERROR(IoError);

#undef CFOTA_DEFINE_ERROR

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("ParseError", "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace cfota

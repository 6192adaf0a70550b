#ifndef IMOG_ERRORS_HPP
#define IMOG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

namespace imog {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON. Line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& detail);
    std::size_t line;
    std::size_t column;
};

/// Well-formed JSON that does not match the document schema.
class SchemaError : public Error {
public:
    SchemaError(std::string path, std::string expected, std::string got);
    std::string path;
    std::string expected;
    std::string got;
};

class DuplicateIdError : public Error {
public:
    explicit DuplicateIdError(ElementId id);
    ElementId id;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(ElementId id, const std::string& what = "element");
    ElementId id;
};

class InvalidModelError : public Error {
public:
    explicit InvalidModelError(std::vector<Diagnostic> diagnostics);
    std::vector<Diagnostic> diagnostics;
};

class EmptyFilterError : public Error {
public:
    EmptyFilterError() : Error("abstraction level filter is empty") {}
};

class EmptyPerspectiveError : public Error {
public:
    explicit EmptyPerspectiveError(const std::string& perspective)
        : Error("perspective '" + perspective + "' has no elements to export") {}
};

class CapExceededError : public Error {
public:
    CapExceededError(std::size_t blocks, std::size_t cap);
    std::size_t blocks;
    std::size_t cap;
};

/// A selection names an owner/member pair that does not exist.
class IllegalSelectionError : public Error {
public:
    IllegalSelectionError(ElementId owner, const std::string& detail);
    ElementId owner;
};

class UnknownFieldError : public Error {
public:
    explicit UnknownFieldError(std::string field);
    std::string field;
};

class InvalidPredicateError : public Error {
public:
    using Error::Error;
};

}  // namespace imog

#endif  // IMOG_ERRORS_HPP

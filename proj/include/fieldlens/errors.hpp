#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fieldlens {

/// Base class for every error raised by the pipeline.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input line that could not be parsed. Carries the 1-based line number.
class MalformedInput : public Error {
public:
    MalformedInput(std::size_t line_no, const std::string& detail)
        : Error("line " + std::to_string(line_no) + ": " + detail), line_no_(line_no) {}
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::size_t line_no_;
};

class EmptyCorpus : public Error {
public:
    using Error::Error;
};

class LabelMismatch : public Error {
public:
    using Error::Error;
};

/// A filter predicate referenced a field that does not exist on PaperRecord.
class UnknownField : public Error {
public:
    using Error::Error;
};

class EmptyGraph : public Error {
public:
    using Error::Error;
};

/// A graph with the wrong scope label was passed to an operation.
class ScopeError : public Error {
public:
    using Error::Error;
};

/// The merged graph has no edges (or is inconsistent with its field graphs).
class DegenerateMerged : public Error {
public:
    using Error::Error;
};

class UnknownKind : public Error {
public:
    using Error::Error;
};

class NoLabelsFound : public Error {
public:
    using Error::Error;
};

class BadMapFile : public Error {
public:
    using Error::Error;
};

class MissingMetadata : public Error {
public:
    using Error::Error;
};

class EmptyNetwork : public Error {
public:
    using Error::Error;
};

class AuthError : public Error {
public:
    using Error::Error;
};

/// The source kept answering 429 past the retry budget.
class RateLimited : public Error {
public:
    RateLimited(double retry_after_s, const std::string& detail)
        : Error(detail), retry_after_s_(retry_after_s) {}
    double retry_after_s() const noexcept { return retry_after_s_; }

private:
    double retry_after_s_;
};

/// A source response is missing fields the adapter requires.
class SourceSchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Configuration / CLI validation problem. Maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fieldlens

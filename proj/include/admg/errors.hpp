#pragma once

#include <stdexcept>
#include <string>

namespace admg {

/// A fixing was requested for a vertex that is not fixable; carries the
/// offending dis(r) ∩ de(r) evidence as a formatted list.
class NotFixableError : public std::invalid_argument {
public:
    NotFixableError(const std::string& vertex, const std::string& evidence, int step_position = -1)
        : std::invalid_argument("vertex '" + vertex + "' is not fixable" +
                                (step_position >= 0 ? " (step " + std::to_string(step_position + 1) + ")" : "") +
                                ": dis∩de = {" + evidence + "}"),
          vertex_(vertex),
          evidence_(evidence),
          step_position_(step_position) {}

    const std::string& vertex() const { return vertex_; }
    const std::string& evidence() const { return evidence_; }
    /// 0-based index of the offending step, or -1 for a single fix.
    int step_position() const { return step_position_; }

private:
    std::string vertex_;
    std::string evidence_;
    int step_position_;
};

/// An enumeration or table exceeded the configured size cap.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel operation required a conditional that is undefined on a
/// positive-probability context.
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure with a 1-based line/column location.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace admg

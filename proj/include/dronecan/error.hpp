#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dronecan {

enum class Errc {
    IdOutOfRange,
    DataTooLong,
    InvalidTimestamp,
    FieldOverflow,
    InvalidSource,
    WrongFrameKind,
    PayloadTooLong,
    InvalidConfig,
    EmptyTape,
    UnknownScenario,
    MissingTape,
    MalformedLine,
    BadLabel,
    BadHex,
    DlcMismatch,
    SinkFailure,
    EmptyDataset,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the toolkit. The code is stable;
/// the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by the dataset readers; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(Errc code, std::size_t line, const std::string& message);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace dronecan

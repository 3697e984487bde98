#include "dronecan/error.hpp"

namespace dronecan {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::IdOutOfRange: return "IdOutOfRange";
    case Errc::DataTooLong: return "DataTooLong";
    case Errc::InvalidTimestamp: return "InvalidTimestamp";
    case Errc::FieldOverflow: return "FieldOverflow";
    case Errc::InvalidSource: return "InvalidSource";
    case Errc::WrongFrameKind: return "WrongFrameKind";
    case Errc::PayloadTooLong: return "PayloadTooLong";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyTape: return "EmptyTape";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::MissingTape: return "MissingTape";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::BadLabel: return "BadLabel";
    case Errc::BadHex: return "BadHex";
    case Errc::DlcMismatch: return "DlcMismatch";
    case Errc::SinkFailure: return "SinkFailure";
    case Errc::EmptyDataset: return "EmptyDataset";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

ParseError::ParseError(Errc code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line)
{
}

}  // namespace dronecan

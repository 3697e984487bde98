#include "dronecan/can_frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dronecan/error.hpp"

namespace dronecan {

Micros seconds_to_micros(double seconds)
{
    return Micros{std::llround(seconds * 1e6)};
}

double to_seconds(Micros t) noexcept
{
    return static_cast<double>(t.count()) / 1e6;
}

CanFrame make_frame(std::uint32_t id, std::span<const std::uint8_t> data, Micros timestamp)
{
    if (id >= kCanIdLimit) {
        throw Error(Errc::IdOutOfRange, "CAN id " + std::to_string(id) + " exceeds 29 bits");
    }
    if (data.size() > kMaxDlc) {
        throw Error(Errc::DataTooLong, std::to_string(data.size()) + " data bytes (max 8)");
    }
    if (timestamp.count() < 0) {
        throw Error(Errc::InvalidTimestamp, "negative timestamp");
    }
    CanFrame f;
    f.id_ = id;
    f.dlc_ = static_cast<std::uint8_t>(data.size());
    std::copy(data.begin(), data.end(), f.bytes_.begin());
    f.timestamp_ = timestamp;
    return f;
}

CanFrame CanFrame::with_id(std::uint32_t id) const
{
    return make_frame(id, data(), timestamp_);
}

CanFrame CanFrame::with_timestamp(Micros t) const
{
    return make_frame(id_, data(), t);
}

}  // namespace dronecan

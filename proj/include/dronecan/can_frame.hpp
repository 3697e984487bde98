#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <span>

namespace dronecan {

/// Relative time since the start of a capture. Microsecond resolution matches
/// the candump log convention.
using Micros = std::chrono::microseconds;

/// Rounds to the nearest microsecond.
Micros seconds_to_micros(double seconds);
double to_seconds(Micros t) noexcept;

inline constexpr std::uint32_t kCanIdLimit = 1U << 29;
inline constexpr std::size_t kMaxDlc = 8;

/// One CAN 2.0B extended data frame. Construct through make_frame(); a
/// CanFrame always satisfies id < 2^29, dlc <= 8 and timestamp >= 0, and the
/// unused tail of the data buffer is zero so equality is by value.
class CanFrame {
public:
    CanFrame() = default;

    [[nodiscard]] std::uint32_t id() const noexcept { return id_; }
    [[nodiscard]] std::uint8_t dlc() const noexcept { return dlc_; }
    [[nodiscard]] std::span<const std::uint8_t> data() const noexcept { return {bytes_.data(), dlc_}; }
    [[nodiscard]] Micros timestamp() const noexcept { return timestamp_; }

    [[nodiscard]] CanFrame with_id(std::uint32_t id) const;
    [[nodiscard]] CanFrame with_timestamp(Micros t) const;

    bool operator==(const CanFrame&) const = default;

private:
    friend CanFrame make_frame(std::uint32_t id, std::span<const std::uint8_t> data, Micros timestamp);

    std::uint32_t id_ = 0;
    std::uint8_t dlc_ = 0;
    std::array<std::uint8_t, kMaxDlc> bytes_{};
    Micros timestamp_{0};
};

/// Throws Error{IdOutOfRange} for id >= 2^29, Error{DataTooLong} for more than
/// eight bytes and Error{InvalidTimestamp} for negative times.
CanFrame make_frame(std::uint32_t id, std::span<const std::uint8_t> data, Micros timestamp);

}  // namespace dronecan

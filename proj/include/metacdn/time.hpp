#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>

namespace metacdn {

/// A point on the (possibly simulated) timeline, in milliseconds since an
/// arbitrary epoch. Handlers never read the wall clock directly; callers
/// inject the current Instant.
struct Instant {
    std::int64_t ms = 0;

    friend auto operator<=>(const Instant&, const Instant&) = default;
};

/// Signed span between two Instants, in milliseconds.
struct Duration {
    std::int64_t ms = 0;

    friend auto operator<=>(const Duration&, const Duration&) = default;
};

constexpr Duration milliseconds(std::int64_t n) { return Duration{n}; }
constexpr Duration seconds(std::int64_t n) { return Duration{n * 1000}; }
constexpr Duration minutes(std::int64_t n) { return Duration{n * 60'000}; }
constexpr Duration hours(std::int64_t n) { return Duration{n * 3'600'000}; }

constexpr Instant operator+(Instant t, Duration d) { return Instant{t.ms + d.ms}; }
constexpr Instant operator-(Instant t, Duration d) { return Instant{t.ms - d.ms}; }
constexpr Duration operator-(Instant a, Instant b) { return Duration{a.ms - b.ms}; }
constexpr Duration operator+(Duration a, Duration b) { return Duration{a.ms + b.ms}; }
constexpr Duration operator-(Duration a, Duration b) { return Duration{a.ms - b.ms}; }

using Clock = std::function<Instant()>;

/// Wall clock adapter for live (non-simulated) services.
inline Instant system_now() {
    using namespace std::chrono;
    return Instant{duration_cast<std::chrono::milliseconds>(
                       system_clock::now().time_since_epoch())
                       .count()};
}

}  // namespace metacdn

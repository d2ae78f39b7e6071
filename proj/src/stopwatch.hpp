#pragma once

#include <chrono>

namespace sist::detail {

class Stopwatch {
public:
    using Clock = std::chrono::steady_clock;

    Stopwatch() : start_(Clock::now()), lap_(start_) {}

    double elapsed() const { return seconds(Clock::now() - start_); }

    /// Seconds since the previous lap (or construction).
    double lap() {
        const auto now = Clock::now();
        const double s = seconds(now - lap_);
        lap_ = now;
        return s;
    }

private:
    static double seconds(Clock::duration d) {
        return std::chrono::duration<double>(d).count();
    }

    Clock::time_point start_;
    Clock::time_point lap_;
};

}  // namespace sist::detail

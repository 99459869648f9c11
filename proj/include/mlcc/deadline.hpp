#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace mlcc {

struct TimeoutError : std::runtime_error {
    TimeoutError() : std::runtime_error("wall-clock deadline exceeded") {}
};

/// Cooperative wall-clock deadline, checked between solver iterations.
class Deadline {
public:
    Deadline() = default;

    static Deadline after_seconds(double seconds) {
        Deadline d;
        d.at_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds));
        return d;
    }

    bool expired() const {
        return at_ && std::chrono::steady_clock::now() >= *at_;
    }

    void check() const {
        if (expired()) throw TimeoutError();
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace mlcc

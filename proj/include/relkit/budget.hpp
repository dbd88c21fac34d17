#pragma once

#include <chrono>

namespace relkit {

/// Cooperative wall-clock budget for long searches. Default-constructed
/// budgets never expire.
class SearchBudget {
public:
    SearchBudget() = default;
    static SearchBudget after(std::chrono::milliseconds ms) {
        SearchBudget b;
        b.deadline_ = std::chrono::steady_clock::now() + ms;
        b.duration_ = ms;
        b.armed_ = true;
        return b;
    }
    bool expired() const {
        return armed_ && std::chrono::steady_clock::now() > deadline_;
    }
    /// A fresh budget with the same duration; used to give each catalogue
    /// case its own window.
    SearchBudget restarted() const { return armed_ ? after(duration_) : SearchBudget{}; }

private:
    std::chrono::steady_clock::time_point deadline_{};
    std::chrono::milliseconds duration_{0};
    bool armed_ = false;
};

}  // namespace relkit

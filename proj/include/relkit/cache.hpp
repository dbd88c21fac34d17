#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace relkit {

/// Content-addressed on-disk record store for check results. Replaying a
/// command with identical inputs returns the cached verdict bit-identically.
class RunCache {
public:
    explicit RunCache(std::string directory);

    static uint64_t key_of(const std::string& canonical_request);

    std::optional<nlohmann::json> lookup(uint64_t key) const;
    void store(uint64_t key, const nlohmann::json& record) const;

    const std::string& directory() const { return dir_; }

private:
    std::string dir_;
    std::string path_for(uint64_t key) const;
};

}  // namespace relkit

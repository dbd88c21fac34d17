#include "relkit/cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace relkit {

RunCache::RunCache(std::string directory) : dir_(std::move(directory)) {
    std::filesystem::create_directories(dir_);
}

uint64_t RunCache::key_of(const std::string& canonical_request) {
    // FNV-1a.
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : canonical_request) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string RunCache::path_for(uint64_t key) const {
    std::ostringstream os;
    os << dir_ << '/' << std::hex << key << ".json";
    return os.str();
}

std::optional<nlohmann::json> RunCache::lookup(uint64_t key) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (...) {
        return std::nullopt;
    }
    return j;
}

void RunCache::store(uint64_t key, const nlohmann::json& record) const {
    std::ofstream out(path_for(key));
    out << record.dump(2) << '\n';
}

}  // namespace relkit

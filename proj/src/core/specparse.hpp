// Shared "kind:key=value,key=value" spec-string parsing for meshes and kernels.
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gcq {

inline std::map<std::string, double> parse_kv(const std::string& body,
                                              const std::string& what) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(what + " spec: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        try {
            kv[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument(what + " spec: bad number in '" + item + "'");
        }
    }
    return kv;
}

inline double need_key(const std::map<std::string, double>& kv, const std::string& key,
                       const std::string& what) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument(what + " spec: missing key '" + key + "'");
    return it->second;
}

// splits "kind:rest"; rest may be empty
inline std::pair<std::string, std::string> split_kind(const std::string& spec,
                                                      const std::string& what) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument(what + " spec: expected 'kind:key=value,...'");
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace gcq

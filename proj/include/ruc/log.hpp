#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace ruc::log {

enum class Level { error = 0, info = 1, debug = 2 };

inline Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("RUC_LOG");
        if (!env) return Level::error;
        const std::string s(env);
        if (s == "debug") return Level::debug;
        if (s == "info") return Level::info;
        return Level::error;
    }();
    return level;
}

inline void emit(Level level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(threshold())) return;
    const char* tag = level == Level::error ? "error" : (level == Level::info ? "info" : "debug");
    std::cerr << "[ruc:" << tag << "] " << msg << "\n";
}

inline void error(const std::string& msg) { emit(Level::error, msg); }
inline void info(const std::string& msg) { emit(Level::info, msg); }
inline void debug(const std::string& msg) { emit(Level::debug, msg); }

}  // namespace ruc::log

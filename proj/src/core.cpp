#include "qjump/core.hpp"

#include <iostream>
#include <mutex>

namespace qjump {

namespace {
std::mutex g_sink_mutex;
std::function<void(const std::string&)> g_sink;
}  // namespace

void warn(const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_sink_mutex);
    if (g_sink) {
        g_sink(msg);
    } else {
        std::cerr << "warning: " << msg << "\n";
    }
}

void set_warning_sink(std::function<void(const std::string&)> sink) {
    std::lock_guard<std::mutex> lock(g_sink_mutex);
    g_sink = std::move(sink);
}

}  // namespace qjump

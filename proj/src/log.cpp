#include "loe/log.hpp"

#include <iostream>
#include <mutex>
#include <vector>

namespace loe::log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

}  // namespace

Sink set_warning_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(message);
}

ScopedCapture::ScopedCapture()
    : previous_(set_warning_sink([this](const std::string& msg) { messages_.push_back(msg); })) {}

ScopedCapture::~ScopedCapture() { set_warning_sink(std::move(previous_)); }

}  // namespace loe::log

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace loe::log {

using Sink = std::function<void(const std::string&)>;

/// Replaces the warning sink and returns the previous one. The default sink
/// writes "warning: <msg>" to stderr.
Sink set_warning_sink(Sink sink);

void warn(const std::string& message);

/// Collects warnings for the lifetime of the object (tests, CLI summaries).
class ScopedCapture {
public:
    ScopedCapture();
    ~ScopedCapture();
    ScopedCapture(const ScopedCapture&) = delete;
    ScopedCapture& operator=(const ScopedCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
    Sink previous_;
};

}  // namespace loe::log

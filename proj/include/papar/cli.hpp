#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>

namespace papar {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalid = 2, kExitCompile = 3 };

// Entry point of the `papar` tool; streams are injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Calls `action` once, then again whenever the file's mtime changes and has
// been stable for `debounce`. Returns when `stop` becomes true.
void watch_file(const std::filesystem::path& path, const std::function<void()>& action, const std::atomic<bool>& stop,
                std::chrono::milliseconds debounce = std::chrono::milliseconds(200));

}  // namespace papar

#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace maintscope {

// Line-delimited diagnostics: "WARN <repo> <commit> <message>" on stderr.
// A sink can be swapped in (tests capture warnings instead of printing).
class Diagnostics {
public:
  using Sink = std::function<void(const std::string&)>;

  static Diagnostics& instance() {
    static Diagnostics d;
    return d;
  }

  void warn(const std::string& repo, const std::string& commit, const std::string& message) {
    std::string line = "WARN " + (repo.empty() ? "-" : repo) + " " +
                       (commit.empty() ? "-" : commit) + " " + message;
    std::lock_guard<std::mutex> lock(mutex_);
    if (sink_) {
      sink_(line);
    } else {
      std::cerr << line << "\n";
    }
  }

  void set_sink(Sink sink) {
    std::lock_guard<std::mutex> lock(mutex_);
    sink_ = std::move(sink);
  }

  void reset_sink() { set_sink(nullptr); }

private:
  std::mutex mutex_;
  Sink sink_;
};

inline void warn(const std::string& repo, const std::string& commit, const std::string& message) {
  Diagnostics::instance().warn(repo, commit, message);
}

}  // namespace maintscope

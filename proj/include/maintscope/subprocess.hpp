#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maintscope {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool ok() const { return exit_code == 0; }
};

class SubprocessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Runs argv[0] with the given arguments, capturing stdout and stderr.
// cwd empty means inherit the current directory.
CommandResult run_command(const std::vector<std::string>& argv, const std::string& cwd = "");

// Long-lived child process driven in request/response lockstep over pipes.
// Requests are small (one line), so a write never fills the pipe before the
// matching response is drained; this cannot deadlock.
class PipeProcess {
public:
  PipeProcess(const std::vector<std::string>& argv, const std::string& cwd = "");
  ~PipeProcess();
  PipeProcess(const PipeProcess&) = delete;
  PipeProcess& operator=(const PipeProcess&) = delete;

  void write_line(const std::string& line);
  std::string read_line();
  std::string read_exact(size_t n);
  bool alive() const { return pid_ > 0; }

private:
  void close_all();
  int pid_ = -1;
  int in_fd_ = -1;   // child's stdin (we write)
  int out_fd_ = -1;  // child's stdout (we read)
  std::string buffer_;
};

}  // namespace maintscope

#include "maintscope/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace maintscope {

namespace {

std::vector<char*> to_argv(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  return argv;
}

[[noreturn]] void exec_child(const std::vector<std::string>& args, const std::string& cwd,
                             int in_fd, int out_fd, int err_fd) {
  if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
  dup2(in_fd, STDIN_FILENO);
  dup2(out_fd, STDOUT_FILENO);
  dup2(err_fd, STDERR_FILENO);
  // Close everything above the standard descriptors.
  for (int fd = 3; fd < 256; ++fd) close(fd);
  auto argv = to_argv(args);
  execvp(argv[0], argv.data());
  _exit(127);
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv, const std::string& cwd) {
  if (argv.empty()) throw SubprocessError("run_command: empty argv");
  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw SubprocessError("pipe() failed: " + std::string(strerror(errno)));

  pid_t pid = fork();
  if (pid < 0) throw SubprocessError("fork() failed: " + std::string(strerror(errno)));
  if (pid == 0) {
    close(out_pipe[0]);
    close(err_pipe[0]);
    int devnull = open("/dev/null", O_RDONLY);
    exec_child(argv, cwd, devnull, out_pipe[1], err_pipe[1]);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);

  CommandResult result;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  bool open_fds[2] = {true, true};
  char buf[8192];
  while (open_fds[0] || open_fds[1]) {
    for (int i = 0; i < 2; ++i) fds[i].events = open_fds[i] ? POLLIN : 0;
    if (poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fds[i] || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      ssize_t n = read(fds[i].fd, buf, sizeof(buf));
      if (n > 0) {
        sinks[i]->append(buf, static_cast<size_t>(n));
      } else {
        close(fds[i].fd);
        open_fds[i] = false;
      }
    }
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

PipeProcess::PipeProcess(const std::vector<std::string>& argv, const std::string& cwd) {
  if (argv.empty()) throw SubprocessError("PipeProcess: empty argv");
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw SubprocessError("pipe() failed: " + std::string(strerror(errno)));

  pid_t pid = fork();
  if (pid < 0) throw SubprocessError("fork() failed: " + std::string(strerror(errno)));
  if (pid == 0) {
    close(to_child[1]);
    close(from_child[0]);
    int devnull = open("/dev/null", O_WRONLY);
    exec_child(argv, cwd, to_child[0], from_child[1], devnull);
  }
  close(to_child[0]);
  close(from_child[1]);
  pid_ = pid;
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
}

PipeProcess::~PipeProcess() { close_all(); }

void PipeProcess::close_all() {
  if (in_fd_ >= 0) close(in_fd_);
  if (out_fd_ >= 0) close(out_fd_);
  in_fd_ = out_fd_ = -1;
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

void PipeProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  size_t written = 0;
  while (written < data.size()) {
    ssize_t n = write(in_fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError("write to child failed: " + std::string(strerror(errno)));
    }
    written += static_cast<size_t>(n);
  }
}

std::string PipeProcess::read_line() {
  while (true) {
    size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char buf[8192];
    ssize_t n = read(out_fd_, buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError("read from child failed: " + std::string(strerror(errno)));
    }
    if (n == 0) throw SubprocessError("child closed its output unexpectedly");
    buffer_.append(buf, static_cast<size_t>(n));
  }
}

std::string PipeProcess::read_exact(size_t n) {
  while (buffer_.size() < n) {
    char buf[8192];
    ssize_t got = read(out_fd_, buf, sizeof(buf));
    if (got < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError("read from child failed: " + std::string(strerror(errno)));
    }
    if (got == 0) throw SubprocessError("child closed its output unexpectedly");
    buffer_.append(buf, static_cast<size_t>(got));
  }
  std::string data = buffer_.substr(0, n);
  buffer_.erase(0, n);
  return data;
}

}  // namespace maintscope

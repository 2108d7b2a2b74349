#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <sstream>

namespace relrep {

std::vector<std::string> split_command(const std::string& command) {
  std::istringstream in(command);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          double time_budget_sec) {
  ProcessResult result;
  if (argv.empty()) {
    result.spawn_failed = true;
    return result;
  }

  int fds[2];
  if (pipe(fds) != 0) {
    result.spawn_failed = true;
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    result.spawn_failed = true;
    return result;
  }
  if (pid == 0) {
    close(fds[0]);
    dup2(fds[1], STDOUT_FILENO);
    close(fds[1]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }

  close(fds[1]);
  const auto start = std::chrono::steady_clock::now();
  const bool bounded = time_budget_sec > 0;
  std::string output;
  char buf[4096];
  bool killed = false;

  for (;;) {
    int timeout_ms = -1;
    if (bounded) {
      double left = time_budget_sec -
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      if (left <= 0 && !killed) {
        kill(pid, SIGKILL);
        killed = true;
      }
      timeout_ms = killed ? 1000 : static_cast<int>(left * 1000) + 10;
    }
    struct pollfd pfd {
      fds[0], POLLIN, 0
    };
    int rc = poll(&pfd, 1, timeout_ms);
    if (rc > 0) {
      if (pfd.revents & (POLLIN | POLLHUP)) {
        ssize_t got = read(fds[0], buf, sizeof(buf));
        if (got > 0) {
          output.append(buf, static_cast<size_t>(got));
          continue;
        }
      }
      break;  // EOF or pipe error
    }
    if (rc == 0 && bounded && !killed) continue;  // loop re-checks deadline
    if (rc < 0 && errno == EINTR) continue;
    break;
  }
  close(fds[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  result.timed_out = killed;
  result.output = std::move(output);
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    result.exit_code = -1;
  if (result.exit_code == 127 && result.output.empty()) result.spawn_failed = true;
  return result;
}

}  // namespace relrep

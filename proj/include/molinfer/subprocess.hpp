#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace molinfer {

struct SubprocessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // stdout and stderr interleaved
};

// Runs argv[0] with the given arguments, capturing output, with a hard
// wall-clock kill at limit + 5s grace.  External solvers hang; we do not.
inline SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                       double time_limit_seconds) {
  if (argv.empty()) throw std::invalid_argument("empty command");
  int pipefd[2];
  if (pipe(pipefd) != 0) throw std::runtime_error("pipe failed");
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);
  SubprocessResult r;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>((time_limit_seconds + 5.0) * 1000));
  char buf[4096];
  int status = 0;
  bool done = false;
  while (!done) {
    ssize_t got;
    while ((got = read(pipefd[0], buf, sizeof buf)) > 0) r.output.append(buf, size_t(got));
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) {
      done = true;
      break;
    }
    if (std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      r.timed_out = true;
      done = true;
      break;
    }
    usleep(20000);
  }
  ssize_t got;
  while ((got = read(pipefd[0], buf, sizeof buf)) > 0) r.output.append(buf, size_t(got));
  close(pipefd[0]);
  if (!r.timed_out && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

}  // namespace molinfer

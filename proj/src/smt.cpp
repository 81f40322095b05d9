#include "tracebound/smt.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>

namespace tb {

std::string SExpr::str() const {
  if (atom) return text;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += " ";
    s += items[i].str();
  }
  return s + ")";
}

namespace {

SExpr parse_at(const std::string& t, std::size_t& i) {
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  if (i >= t.size()) throw SolverError("truncated s-expression: " + t);
  if (t[i] == '(') {
    ++i;
    SExpr e;
    e.atom = false;
    for (;;) {
      while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
      if (i >= t.size()) throw SolverError("unbalanced s-expression: " + t);
      if (t[i] == ')') {
        ++i;
        return e;
      }
      e.items.push_back(parse_at(t, i));
    }
  }
  if (t[i] == ')') throw SolverError("unexpected ')' in: " + t);
  SExpr e;
  std::size_t start = i;
  if (t[i] == '"') {
    for (++i; i < t.size(); ++i) {
      if (t[i] == '"') {
        if (i + 1 < t.size() && t[i + 1] == '"') {
          ++i;
          continue;
        }
        ++i;
        break;
      }
    }
  } else if (t[i] == '|') {
    for (++i; i < t.size() && t[i] != '|'; ++i) {
    }
    ++i;
  } else {
    while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '(' && t[i] != ')') ++i;
  }
  e.text = t.substr(start, i - start);
  return e;
}

}  // namespace

SExpr parse_sexpr(const std::string& text) {
  std::size_t i = 0;
  return parse_at(text, i);
}

SmtSession::SmtSession(SolverConfig cfg) : cfg_(std::move(cfg)) {
  try {
    start();
  } catch (...) {
    stop();
    throw;
  }
}

SmtSession::~SmtSession() { stop(); }

void SmtSession::start() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw SolverError("pipe() failed");
  signal(SIGPIPE, SIG_IGN);
  // argv is built before fork: the child may only call async-signal-safe
  // functions when the parent is multi-threaded.
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(cfg_.path.c_str()));
  for (auto& a : cfg_.args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_ = fork();
  if (pid_ < 0) throw SolverError("fork() failed");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(cfg_.path.c_str(), argv.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  std::string first = command("(set-option :print-success true)");
  if (first != "success") throw SolverError("solver '" + cfg_.path + "' did not start: " + first);
  command("(set-option :global-declarations true)");
  command("(set-option :produce-models true)");
  command("(set-option :produce-unsat-cores true)");
  if (cfg_.interpolation) command("(set-option :produce-interpolants true)");
  command("(set-option :timeout " + std::to_string(cfg_.timeout_ms) + ")");
  std::string logic = command("(set-logic QF_LIA)");
  if (logic != "success") throw SolverError("solver rejected QF_LIA: " + logic);
}

void SmtSession::stop() {
  if (pid_ <= 0) return;
  if (to_child_ >= 0) {
    const char bye[] = "(exit)\n";
    [[maybe_unused]] auto n = ::write(to_child_, bye, sizeof(bye) - 1);
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, &status, WNOHANG) != 0) {
      pid_ = -1;
      return;
    }
    usleep(2000);
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, &status, 0);
  pid_ = -1;
}

void SmtSession::write_all(const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("write to solver failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SmtSession::read_response() {
  const int wait_ms = static_cast<int>(cfg_.timeout_ms) + 10000;
  for (;;) {
    // Try to cut one complete response from the buffer.
    std::size_t i = 0;
    while (i < buffer_.size() && std::isspace(static_cast<unsigned char>(buffer_[i]))) ++i;
    if (i < buffer_.size()) {
      std::size_t j = i;
      bool complete = false;
      if (buffer_[i] == '(') {
        int depth = 0;
        bool in_string = false, in_bar = false;
        for (; j < buffer_.size(); ++j) {
          char c = buffer_[j];
          if (in_string) {
            if (c == '"') in_string = false;
            continue;
          }
          if (in_bar) {
            if (c == '|') in_bar = false;
            continue;
          }
          if (c == '"') in_string = true;
          else if (c == '|') in_bar = true;
          else if (c == '(') ++depth;
          else if (c == ')' && --depth == 0) {
            ++j;
            complete = true;
            break;
          }
        }
      } else {
        while (j < buffer_.size() && !std::isspace(static_cast<unsigned char>(buffer_[j]))) ++j;
        complete = j < buffer_.size();
      }
      if (complete) {
        std::string r = buffer_.substr(i, j - i);
        buffer_.erase(0, j);
        return r;
      }
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = poll(&pfd, 1, wait_ms);
    if (rc == 0) throw SolverError("solver did not answer in time");
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw SolverError("poll on solver pipe failed");
    }
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw SolverError("solver process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string SmtSession::command(const std::string& cmd) {
  write_all(cmd + "\n");
  ++sent_;
  return read_response();
}

std::vector<std::string> SmtSession::batch(const std::vector<std::string>& cmds) {
  std::string data;
  for (const auto& c : cmds) data += c + "\n";
  write_all(data);
  sent_ += cmds.size();
  std::vector<std::string> out;
  out.reserve(cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) out.push_back(read_response());
  return out;
}

}  // namespace tb

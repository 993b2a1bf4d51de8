// Line-protocol subprocess backend and JSON-over-HTTP service backend.
//
// Subprocess wire protocol: UTF-8, LF-delimited, one sentence per line, flush
// after each batch; the child must emit exactly one line per input line.
// Service protocol: POST {"sentences": [...]}, expect {"translations": [...]}
// of equal length.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bt/errors.hpp"
#include "bt/translate.hpp"

namespace bt::translate {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string batch_tag(std::size_t off, std::size_t end, std::size_t total) {
  return "batch [" + std::to_string(off) + "," + std::to_string(end) + ") of " +
         std::to_string(total) + " sentences";
}

class SubprocessTranslator final : public Translator {
 public:
  SubprocessTranslator(std::string command, std::string src, std::string tgt,
                       BackendOptions opts)
      : Translator(std::move(src), std::move(tgt), "cmd:" + command),
        command_(std::move(command)),
        opts_(opts) {
    ignore_sigpipe_once();
  }

  ~SubprocessTranslator() override {
    std::lock_guard<std::mutex> lock(mu_);
    shutdown_child();
  }

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::string> out;
    out.reserve(in.size());
    for (std::size_t off = 0; off < in.size(); off += opts_.batch_size)
      run_batch(in, off, std::min(in.size(), off + opts_.batch_size), out);
    return out;
  }

 private:
  void run_batch(const std::vector<std::string>& in, std::size_t off, std::size_t end,
                 std::vector<std::string>& out) const {
    ensure_started();
    const std::size_t need = end - off;
    const std::string tag = batch_tag(off, end, in.size());

    std::string payload;
    for (std::size_t i = off; i < end; ++i) {
      payload += in[i];
      payload += '\n';
    }

    std::atomic<bool> write_failed{false};
    std::thread writer([&] {
      const char* p = payload.data();
      std::size_t left = payload.size();
      while (left > 0) {
        const ssize_t n = ::write(stdin_fd_, p, left);
        if (n < 0) {
          if (errno == EINTR) continue;
          write_failed.store(true);
          return;
        }
        p += n;
        left -= static_cast<std::size_t>(n);
      }
    });

    std::vector<std::string> lines;
    bool eof = false, timed_out = false;
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(opts_.timeout_sec));
    while (lines.size() < need && !eof && !timed_out) {
      // Pull complete lines out of the pending buffer first.
      std::size_t nl;
      while (lines.size() < need && (nl = pending_.find('\n')) != std::string::npos) {
        lines.push_back(pending_.substr(0, nl));
        pending_.erase(0, nl + 1);
      }
      if (lines.size() >= need) break;

      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (left.count() <= 0) {
        timed_out = true;
        break;
      }
      struct pollfd pfd{stdout_fd_, POLLIN, 0};
      const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(
                                         left.count(), 1000)));
      if (pr < 0) {
        if (errno == EINTR) continue;
        eof = true;
        break;
      }
      if (pr == 0) continue;
      char buf[65536];
      const ssize_t n = ::read(stdout_fd_, buf, sizeof buf);
      if (n < 0) {
        if (errno == EINTR) continue;
        eof = true;
      } else if (n == 0) {
        eof = true;
      } else {
        pending_.append(buf, static_cast<std::size_t>(n));
      }
    }

    if (timed_out) kill_child();
    writer.join();

    if (lines.size() == need && !timed_out) {
      if (!pending_.empty() && pending_.find('\n') != std::string::npos) {
        const std::string diag = stderr_tail();
        shutdown_child();
        throw ProtocolError("backend '" + id() + "' emitted more lines than inputs for " +
                            tag + diag);
      }
      for (auto& l : lines) out.push_back(std::move(l));
      return;
    }

    const int status = shutdown_child();
    const std::string diag = stderr_tail();
    if (timed_out)
      throw BackendError("backend '" + id() + "' timed out after " +
                         std::to_string(opts_.timeout_sec) + "s on " + tag + diag);
    if (WIFEXITED(status) && WEXITSTATUS(status) != 0)
      throw BackendError("backend '" + id() + "' exited with status " +
                         std::to_string(WEXITSTATUS(status)) + " during " + tag + diag);
    if (WIFSIGNALED(status))
      throw BackendError("backend '" + id() + "' was killed by signal " +
                         std::to_string(WTERMSIG(status)) + " during " + tag + diag);
    throw ProtocolError("backend '" + id() + "' emitted " + std::to_string(lines.size()) +
                        " of " + std::to_string(need) + " lines for " + tag + diag);
  }

  void ensure_started() const {
    if (pid_ > 0) return;
    int to_child[2], from_child[2], err_pipe[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0 || ::pipe(err_pipe) != 0)
      throw BackendError("pipe() failed: " + std::string(std::strerror(errno)));

    const pid_t pid = ::fork();
    if (pid < 0) throw BackendError("fork() failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
      // Own process group, so a kill reaches the shell's descendants too.
      ::setpgid(0, 0);
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::dup2(err_pipe[1], STDERR_FILENO);
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1], err_pipe[0],
                     err_pipe[1]})
        ::close(fd);
      ::signal(SIGPIPE, SIG_DFL);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }

    ::close(to_child[0]);
    ::close(from_child[1]);
    ::close(err_pipe[1]);
    // Children spawned later by other translators must not inherit our ends.
    for (int fd : {to_child[1], from_child[0], err_pipe[0]}) {
      const int flags = ::fcntl(fd, F_GETFD);
      if (flags >= 0) ::fcntl(fd, F_SETFD, flags | FD_CLOEXEC);
    }
    pid_ = pid;
    stdin_fd_ = to_child[1];
    stdout_fd_ = from_child[0];
    stderr_fd_ = err_pipe[0];
    pending_.clear();
    stderr_buf_.clear();
    stderr_thread_ = std::thread([this, fd = stderr_fd_] {
      char buf[4096];
      for (;;) {
        const ssize_t n = ::read(fd, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return;
        std::lock_guard<std::mutex> lk(stderr_mu_);
        stderr_buf_.append(buf, static_cast<std::size_t>(n));
        if (stderr_buf_.size() > 65536)
          stderr_buf_.erase(0, stderr_buf_.size() - 65536);  // keep the tail
      }
    });
  }

  // SIGKILL to the whole process group, then the child itself as a fallback.
  void kill_child() const {
    if (pid_ <= 0) return;
    if (::kill(-pid_, SIGKILL) != 0) ::kill(pid_, SIGKILL);
  }

  // Returns the child's wait status (0 if there was no child).
  int shutdown_child() const {
    if (pid_ <= 0) return 0;
    ::close(stdin_fd_);
    stdin_fd_ = -1;
    int status = 0;
    const auto grace_end = Clock::now() + std::chrono::seconds(2);
    for (;;) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) break;
      if (r < 0 && errno != EINTR) break;
      if (Clock::now() >= grace_end) {
        kill_child();
        ::waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    // Stray grandchildren could keep the stderr pipe open past the shell's
    // death; the group kill makes the drain thread see EOF. No direct-pid
    // fallback here: pid_ is already reaped and could have been recycled.
    ::kill(-pid_, SIGKILL);
    if (stderr_thread_.joinable()) stderr_thread_.join();
    ::close(stdout_fd_);
    ::close(stderr_fd_);
    pid_ = -1;
    stdout_fd_ = stderr_fd_ = -1;
    pending_.clear();
    return status;
  }

  std::string stderr_tail() const {
    std::lock_guard<std::mutex> lk(stderr_mu_);
    if (stderr_buf_.empty()) return "";
    std::string tail = stderr_buf_.size() > 2048
                           ? stderr_buf_.substr(stderr_buf_.size() - 2048)
                           : stderr_buf_;
    return "; stderr: " + tail;
  }

  std::string command_;
  BackendOptions opts_;
  mutable std::mutex mu_;  // serializes access to the child
  mutable pid_t pid_ = -1;
  mutable int stdin_fd_ = -1, stdout_fd_ = -1, stderr_fd_ = -1;
  mutable std::string pending_;
  mutable std::thread stderr_thread_;
  mutable std::mutex stderr_mu_;
  mutable std::string stderr_buf_;
};

class ServiceTranslator final : public Translator {
 public:
  ServiceTranslator(std::string url, std::string src, std::string tgt, BackendOptions opts)
      : Translator(std::move(src), std::move(tgt), url), opts_(opts) {
    const std::size_t scheme = url.find("://");
    const std::size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) {
      base_ = url;
      path_ = "/";
    } else {
      base_ = url.substr(0, slash);
      path_ = url.substr(slash);
    }
  }

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    std::vector<std::string> out;
    out.reserve(in.size());
    for (std::size_t off = 0; off < in.size(); off += opts_.batch_size) {
      const std::size_t end = std::min(in.size(), off + opts_.batch_size);
      post_batch(in, off, end, out);
    }
    return out;
  }

 private:
  void post_batch(const std::vector<std::string>& in, std::size_t off, std::size_t end,
                  std::vector<std::string>& out) const {
    const std::string tag = batch_tag(off, end, in.size());
    nlohmann::json req;
    req["sentences"] = std::vector<std::string>(in.begin() + off, in.begin() + end);

    // A client per call keeps concurrent batches safe.
    httplib::Client cli(base_);
    const auto secs = static_cast<time_t>(opts_.timeout_sec);
    const auto usecs =
        static_cast<time_t>((opts_.timeout_sec - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    const auto res = cli.Post(path_, req.dump(), "application/json");
    if (!res)
      throw BackendError("backend '" + id() + "' request failed (" +
                         httplib::to_string(res.error()) + ") on " + tag);
    if (res->status != 200)
      throw BackendError("backend '" + id() + "' returned HTTP " +
                         std::to_string(res->status) + " on " + tag);
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError("backend '" + id() + "' sent malformed JSON on " + tag + ": " +
                          e.what());
    }
    if (!body.contains("translations") || !body["translations"].is_array())
      throw ProtocolError("backend '" + id() + "' response lacks a translations array on " +
                          tag);
    const auto& arr = body["translations"];
    if (arr.size() != end - off)
      throw ProtocolError("backend '" + id() + "' returned " + std::to_string(arr.size()) +
                          " translations for " + std::to_string(end - off) +
                          " sentences on " + tag);
    for (const auto& t : arr) {
      if (!t.is_string())
        throw ProtocolError("backend '" + id() + "' returned a non-string translation on " +
                            tag);
      out.push_back(t.get<std::string>());
    }
  }

  BackendOptions opts_;
  std::string base_, path_;
};

}  // namespace

TranslatorPtr subprocess_translator(std::string command, std::string src_lang,
                                    std::string tgt_lang, BackendOptions opts) {
  return std::make_shared<SubprocessTranslator>(std::move(command), std::move(src_lang),
                                                std::move(tgt_lang), opts);
}

TranslatorPtr service_translator(std::string url, std::string src_lang,
                                 std::string tgt_lang, BackendOptions opts) {
  return std::make_shared<ServiceTranslator>(std::move(url), std::move(src_lang),
                                             std::move(tgt_lang), opts);
}

}  // namespace bt::translate

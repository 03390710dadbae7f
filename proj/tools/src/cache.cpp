#include "petrovitch/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

namespace petrovitch::cli {

namespace fs = std::filesystem;

namespace {

class LockFile {
 public:
  explicit LockFile(fs::path path) : path_(std::move(path)) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        ::close(fd);
        held_ = true;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
  ~LockFile() {
    if (held_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

  bool held() const { return held_; }

 private:
  fs::path path_;
  bool held_ = false;
};

}  // namespace

std::optional<nlohmann::json> ResultCache::load(const std::string& name) const {
  if (!dir_) return std::nullopt;
  fs::path p = fs::path(*dir_) / (name + ".json");
  std::ifstream in(p);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

bool ResultCache::store(const std::string& name, const nlohmann::json& doc) const {
  if (!dir_) return false;
  std::error_code ec;
  fs::create_directories(*dir_, ec);
  if (ec) return false;
  fs::path target = fs::path(*dir_) / (name + ".json");
  LockFile lock(fs::path(*dir_) / (name + ".lock"));
  if (!lock.held()) return false;
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return false;
    out << doc.dump(1) << '\n';
    if (!out) return false;
  }
  fs::rename(tmp, target, ec);
  return !ec;
}

}  // namespace petrovitch::cli

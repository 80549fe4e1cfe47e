#include "ontopure/atomic_file.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

#include "ontopure/error.hpp"

namespace ontopure {

namespace {

[[noreturn]] void io_fail(const std::string& what, const std::filesystem::path& path) {
    throw OntologyError(ErrorCode::Io, what + " " + path.string() + ": " + std::strerror(errno));
}

class FdGuard {
public:
    explicit FdGuard(int fd) : fd_(fd) {}
    ~FdGuard() {
        if (fd_ >= 0) ::close(fd_);
    }
    FdGuard(const FdGuard&) = delete;
    FdGuard& operator=(const FdGuard&) = delete;
    int get() const { return fd_; }
    int release() { return std::exchange(fd_, -1); }

private:
    int fd_;
};

void fsync_directory(const std::filesystem::path& dir) {
    const int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (fd < 0) return;
    ::fsync(fd);
    ::close(fd);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view data,
                       const std::function<void()>& before_rename) {
    const auto dir = path.parent_path();
    std::string tmpl = (dir / ("." + path.filename().string() + ".tmpXXXXXX")).string();
    FdGuard fd(::mkstemp(tmpl.data()));
    if (fd.get() < 0) io_fail("cannot create temp file for", path);
    const std::filesystem::path tmp = tmpl;

    try {
        std::size_t done = 0;
        while (done < data.size()) {
            const auto n = ::write(fd.get(), data.data() + done, data.size() - done);
            if (n < 0) {
                if (errno == EINTR) continue;
                io_fail("cannot write", tmp);
            }
            done += static_cast<std::size_t>(n);
        }
        if (::fsync(fd.get()) != 0) io_fail("cannot sync", tmp);
        if (::close(fd.release()) != 0) io_fail("cannot close", tmp);
        ::chmod(tmp.c_str(), 0644);
        if (before_rename) before_rename();
        if (::rename(tmp.c_str(), path.c_str()) != 0) io_fail("cannot rename onto", path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
    fsync_directory(dir);
}

}  // namespace ontopure

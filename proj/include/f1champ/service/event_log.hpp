#pragma once

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "../json_util.hpp"

namespace f1champ::service {

/// Append-only newline-delimited JSON file; every append is on disk on return.
class EventLog
{
  public:
    explicit EventLog(std::string path) : path_(std::move(path))
    {
        fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC,
                     0644);
        if (fd_ < 0)
            throw std::system_error(errno, std::generic_category(),
                                    "cannot open " + path_);
    }
    EventLog(EventLog const&) = delete;
    EventLog& operator=(EventLog const&) = delete;
    ~EventLog()
    {
        if (fd_ >= 0)
            ::close(fd_);
    }

    void append(json const& event)
    {
        std::string line = event.dump();
        line += '\n';
        char const* p = line.data();
        std::size_t left = line.size();
        while (left > 0)
        {
            ssize_t const n = ::write(fd_, p, left);
            if (n < 0)
            {
                if (errno == EINTR)
                    continue;
                throw std::system_error(errno, std::generic_category(),
                                        "write " + path_);
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
        if (::fsync(fd_) != 0)
            throw std::system_error(errno, std::generic_category(),
                                    "fsync " + path_);
    }

    std::string const& path() const { return path_; }

    /// Every complete line; a torn final line from a crash is dropped.
    static std::vector<json> read(std::string const& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw InputError("cannot read " + path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        std::vector<json> out;
        std::size_t start = 0;
        int line = 0;
        while (start < text.size())
        {
            std::size_t const end = text.find('\n', start);
            if (end == std::string::npos)
                break;
            ++line;
            std::string const row = text.substr(start, end - start);
            start = end + 1;
            if (row.empty())
                continue;
            try
            {
                out.push_back(json::parse(row));
            }
            catch (json::parse_error const& e)
            {
                throw InputError(path + ": line " + std::to_string(line)
                                 + ": " + e.what());
            }
        }
        return out;
    }

    /// Cut a torn final line so later appends start on a fresh line.
    static void drop_torn_tail(std::string const& path)
    {
        std::ifstream in(path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        if (text.empty() || text.back() == '\n')
            return;
        auto const keep = text.find_last_of('\n');
        std::filesystem::resize_file(
            path, keep == std::string::npos ? 0 : keep + 1);
    }

  private:
    std::string path_;
    int fd_ = -1;
};

}  // namespace f1champ::service

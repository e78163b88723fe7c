#pragma once

// Shared helpers for tests that touch the filesystem or spawn processes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "refdetect/repo_io.hpp"

namespace testsupport {

struct TempDir {
    std::string path;

    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "refdetect_XXXXXX")
                .string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data()))
            throw std::runtime_error("mkdtemp failed for " + tmpl);
        path = buf.data();
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::string sub(const std::string& rel) const {
        return (std::filesystem::path(path) / rel).string();
    }
};

inline void write_file(const std::string& path, const std::string& text) {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// git with identity and newline handling pinned so repos build the same way
// on any machine
inline refdetect::CommandResult git(const std::string& repo,
                                    std::vector<std::string> args) {
    std::vector<std::string> argv = {
        "git", "-C", repo,
        "-c", "user.name=test",
        "-c", "user.email=test@example.com",
        "-c", "core.autocrlf=false",
        "-c", "commit.gpgsign=false",
    };
    argv.insert(argv.end(), args.begin(), args.end());
    return refdetect::run_command(argv);
}

inline void git_ok(const std::string& repo, std::vector<std::string> args) {
    auto r = git(repo, std::move(args));
    if (r.exit_code != 0)
        throw std::runtime_error("git failed: " + r.err + r.out);
}

inline std::string git_rev(const std::string& repo, const std::string& name) {
    auto r = git(repo, {"rev-parse", name});
    if (r.exit_code != 0) throw std::runtime_error("rev-parse failed: " + r.err);
    std::string s = r.out;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

inline void init_repo(const std::string& repo) {
    std::filesystem::create_directories(repo);
    auto r = refdetect::run_command({"git", "init", "-q", repo});
    if (r.exit_code != 0) throw std::runtime_error("git init failed: " + r.err);
}

} // namespace testsupport

#pragma once

// Revision pair loading: either two directories on disk or a commit and its
// parent in a git repository. Git access shells out to the git executable;
// no history parsing is reimplemented here.

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "refdetect/parser.hpp"

namespace refdetect {

struct RepoNotFound : Error {
    explicit RepoNotFound(const std::string& path)
        : Error("not a git repository: " + path) {}
};

struct UnknownCommit : Error {
    explicit UnknownCommit(const std::string& id)
        : Error("unknown commit: " + id) {}
};

struct MergeCommitSkipped : Error {
    explicit MergeCommitSkipped(const std::string& id)
        : Error("merge commit skipped (more than one parent): " + id) {}
};

struct BadRange : Error {
    explicit BadRange(const std::string& range)
        : Error("bad revision range: " + range) {}
};

struct PathNotFound : Error {
    explicit PathNotFound(const std::string& path)
        : Error("path not found: " + path) {}
};

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// fork/exec with both output streams captured; no shell involved
inline CommandResult run_command(const std::vector<std::string>& argv,
                                 const std::string& cwd = {}) {
    if (argv.empty()) throw Error("run_command: empty argv");
    int outp[2], errp[2];
    if (pipe(outp) != 0 || pipe(errp) != 0)
        throw Error("pipe failed: " + std::string(std::strerror(errno)));

    pid_t pid = fork();
    if (pid < 0) throw Error("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, 0);
        dup2(outp[1], 1);
        dup2(errp[1], 2);
        close(outp[0]); close(outp[1]);
        close(errp[0]); close(errp[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    close(outp[1]);
    close(errp[1]);

    CommandResult res;
    struct pollfd fds[2] = {{outp[0], POLLIN, 0}, {errp[0], POLLIN, 0}};
    bool open_fd[2] = {true, true};
    char buf[4096];
    while (open_fd[0] || open_fd[1]) {
        fds[0].fd = open_fd[0] ? outp[0] : -1;
        fds[1].fd = open_fd[1] ? errp[0] : -1;
        if (poll(fds, 2, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int i = 0; i < 2; ++i) {
            if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP)))
                continue;
            ssize_t n = read(fds[i].fd, buf, sizeof buf);
            if (n > 0)
                (i == 0 ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
            else if (n == 0 || (n < 0 && errno != EINTR))
                open_fd[i] = false;
        }
    }
    close(outp[0]);
    close(errp[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) res.exit_code = 128 + WTERMSIG(status);
    return res;
}

struct RevisionPair {
    std::string label;
    std::vector<SourceFile> before_files;
    std::vector<SourceFile> after_files;
};

inline bool has_supported_extension(const std::string& path) {
    return path.size() > 5 && path.compare(path.size() - 5, 5, ".java") == 0;
}

namespace detail {

inline CommandResult run_git(const std::string& repo,
                             std::vector<std::string> args) {
    std::vector<std::string> argv = {"git", "-C", repo};
    argv.insert(argv.end(), std::make_move_iterator(args.begin()),
                std::make_move_iterator(args.end()));
    return run_command(argv);
}

inline void ensure_repo(const std::string& repo) {
    if (!std::filesystem::exists(repo)) throw RepoNotFound(repo);
    if (run_git(repo, {"rev-parse", "--git-dir"}).exit_code != 0)
        throw RepoNotFound(repo);
}

inline std::string chomp(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

inline std::string resolve_commit(const std::string& repo,
                                  const std::string& id) {
    auto r = run_git(repo, {"rev-parse", "--verify", "--quiet",
                            id + "^{commit}"});
    if (r.exit_code != 0) throw UnknownCommit(id);
    return chomp(r.out);
}

inline std::string read_blob(const std::string& repo, const std::string& rev,
                             const std::string& path) {
    auto r = run_git(repo, {"cat-file", "blob", rev + ":" + path});
    if (r.exit_code != 0)
        throw Error("cannot read " + rev + ":" + path + ": " + chomp(r.err));
    return normalize_newlines(r.out);
}

// hash of the empty tree, stable across every git repository
inline const char* empty_tree() {
    return "4b825dc642cb6eb9a060e54bf8d69288fbee4904";
}

} // namespace detail

// The changed-files view of one commit against its parent: only added,
// removed or edited files with the supported extension are loaded.
inline RevisionPair load_commit_pair(const std::string& repo,
                                     const std::string& commit) {
    detail::ensure_repo(repo);
    std::string full = detail::resolve_commit(repo, commit);

    auto pr = detail::run_git(repo, {"rev-list", "--parents", "-n", "1", full});
    if (pr.exit_code != 0) throw UnknownCommit(commit);
    std::istringstream ps(detail::chomp(pr.out));
    std::vector<std::string> ids;
    for (std::string w; ps >> w;) ids.push_back(w);
    if (ids.size() > 2) throw MergeCommitSkipped(commit);
    std::string parent = ids.size() == 2 ? ids[1] : detail::empty_tree();

    auto dr = detail::run_git(repo, {"diff-tree", "-r", "--no-renames",
                                     "--name-status", "-z", parent, full});
    if (dr.exit_code != 0)
        throw Error("diff-tree failed: " + detail::chomp(dr.err));

    RevisionPair out;
    out.label = full;
    const std::string& raw = dr.out;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t j = raw.find('\0', i);
        if (j == std::string::npos) break;
        std::string status = raw.substr(i, j - i);
        i = j + 1;
        j = raw.find('\0', i);
        if (j == std::string::npos) break;
        std::string path = raw.substr(i, j - i);
        i = j + 1;
        if (!has_supported_extension(path)) continue;
        char st = status.empty() ? '?' : status[0];
        if (st == 'A' || st == 'M' || st == 'T') {
            out.after_files.push_back(
                SourceFile{path, detail::read_blob(repo, full, path)});
        }
        if (st == 'D' || st == 'M' || st == 'T') {
            out.before_files.push_back(
                SourceFile{path, detail::read_blob(repo, parent, path)});
        }
    }
    auto by_path = [](const SourceFile& a, const SourceFile& b) {
        return a.path < b.path;
    };
    std::sort(out.before_files.begin(), out.before_files.end(), by_path);
    std::sort(out.after_files.begin(), out.after_files.end(), by_path);
    return out;
}

// Two directory trees compared by relative path; byte-identical files are
// dropped so the pair only carries what actually changed.
inline RevisionPair load_directory_pair(const std::string& before_dir,
                                        const std::string& after_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(before_dir)) throw PathNotFound(before_dir);
    if (!fs::is_directory(after_dir)) throw PathNotFound(after_dir);

    auto collect = [](const std::string& root) {
        std::map<std::string, std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(root)) {
            if (!entry.is_regular_file()) continue;
            std::string rel = fs::relative(entry.path(), root).generic_string();
            if (!has_supported_extension(rel)) continue;
            std::ifstream f(entry.path(), std::ios::binary);
            std::ostringstream ss;
            ss << f.rdbuf();
            files[rel] = detail::normalize_newlines(ss.str());
        }
        return files;
    };

    auto before = collect(before_dir);
    auto after = collect(after_dir);

    RevisionPair out;
    out.label = before_dir + ".." + after_dir;
    for (const auto& [path, text] : before) {
        auto it = after.find(path);
        if (it != after.end() && it->second == text) continue; // unchanged
        out.before_files.push_back(SourceFile{path, text});
    }
    for (const auto& [path, text] : after) {
        auto it = before.find(path);
        if (it != before.end() && it->second == text) continue;
        out.after_files.push_back(SourceFile{path, text});
    }
    return out;
}

// Non-merge commits reachable in the given range, oldest first.
inline std::vector<std::string> list_commits(const std::string& repo,
                                             const std::string& range) {
    detail::ensure_repo(repo);
    auto r = detail::run_git(repo, {"rev-list", "--no-merges", "--reverse",
                                    range, "--"});
    if (r.exit_code != 0) throw BadRange(range);
    std::vector<std::string> out;
    std::istringstream ss(r.out);
    for (std::string line; std::getline(ss, line);) {
        line = detail::chomp(line);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

} // namespace refdetect

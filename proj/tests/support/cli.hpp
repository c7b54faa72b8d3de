#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "support/tempdir.hpp"

namespace testsupport {

struct cli_result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string lexdiv_binary() {
    const char* bin = std::getenv("LEXDIV_BIN");
    if (!bin || !*bin)
        throw std::runtime_error(
            "LEXDIV_BIN is not set; run through ctest or export the tool path");
    return bin;
}

// Runs the lexdiv binary with the given argument string, capturing streams.
// env_prefix, when set, is prepended verbatim (e.g. "LEXDIV_THREADS=1 ").
inline cli_result run_lexdiv(const std::string& args, const temp_dir& dir,
                             const std::string& env_prefix = {}) {
    const std::string out_path = dir.file("cli-stdout.txt");
    const std::string err_path = dir.file("cli-stderr.txt");
    const std::string cmd = env_prefix + "\"" + lexdiv_binary() + "\" " + args +
                            " > \"" + out_path + "\" 2> \"" + err_path + "\"";
    const int status = std::system(cmd.c_str());
    cli_result result;
    if (status == -1) throw std::runtime_error("failed to spawn lexdiv");
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

}  // namespace testsupport

#include <string>
#include <vector>

#include "rspbench_cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rspbench::cli::run_cli(std::move(args));
}

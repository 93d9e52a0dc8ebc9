#include <string>
#include <vector>

#include "twochoice/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return twochoice::cli::run_cli(args);
}

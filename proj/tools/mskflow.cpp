#include <string>
#include <vector>

#include "mskflow/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return msk::run_cli(args);
}

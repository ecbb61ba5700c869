#include <string>
#include <vector>

#include "textsynth/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return textsynth::run_cli(args);
}

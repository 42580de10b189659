#include "rectsim/harness.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return rectsim::run_cli(args);
}

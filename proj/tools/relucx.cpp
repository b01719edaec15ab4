#include <iostream>
#include <string>
#include <vector>

#include "relucx/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return relucx::cli::run(args, std::cout, std::cerr);
}

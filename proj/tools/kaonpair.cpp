#include "kaonpair/cli/app.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    return kaonpair::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

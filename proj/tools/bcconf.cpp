#include <iostream>
#include <string>
#include <vector>

#include "bcconf/cli.hpp"

int main(int argc, char** argv) {
    return bcconf::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include <convexgeo/cli_app.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return convexgeo::cli::run_command(std::move(args), std::cout, std::cerr);
}

#include <string>
#include <vector>

#include "hbsim/cli.hpp"

int main(int argc, char** argv) {
    return hbsim::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}

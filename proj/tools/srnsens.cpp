#include <iostream>

#include "srnsens/cli/app.hpp"

int main(int argc, char** argv) { return srn::run_cli(argc, argv, std::cout, std::cerr); }

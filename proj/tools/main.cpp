#include "cli.hpp"

int main(int argc, char** argv) { return spectile::cli::run(argc, argv, std::cout, std::cerr); }

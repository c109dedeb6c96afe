#include <iostream>

#include "auctionval/cli.hpp"

int main(int argc, char** argv) { return auctionval::run_cli(argc, argv, std::cout, std::cerr); }

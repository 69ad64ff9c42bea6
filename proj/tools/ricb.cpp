#include "ricb/cli.hpp"

int main(int argc, char** argv) { return ricb::cli::run(argc, argv); }

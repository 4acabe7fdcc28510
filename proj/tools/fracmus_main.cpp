#include "fracmus/cli.hpp"

int main(int argc, char** argv) { return fracmus::cli::run(argc, argv); }

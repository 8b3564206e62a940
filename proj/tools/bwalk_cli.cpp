#include "bwalk/cli.hpp"

int main(int argc, char** argv) { return bwalk::cli::main(argc, argv); }

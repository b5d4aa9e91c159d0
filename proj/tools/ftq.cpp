#include "ftq/cli.hpp"

int main(int argc, char** argv) { return ftq::cli::main(argc, argv); }

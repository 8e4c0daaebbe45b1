#include "cli.hpp"

int main(int argc, char** argv) { return bpl::cli::run(argc, argv); }

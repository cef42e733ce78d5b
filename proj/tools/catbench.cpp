#include "catbench/cli.hpp"

int main(int argc, char** argv) { return catbench::cli::main_entry(argc, argv); }

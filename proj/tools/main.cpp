#include "rapgen/cli.hpp"

int main(int argc, char** argv) { return rapgen::run_cli(argc, argv); }

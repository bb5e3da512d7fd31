#include "fuzzdyn/cli.hpp"

int main(int argc, char** argv) { return fuzzdyn::run_cli(argc, argv); }

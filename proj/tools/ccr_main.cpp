#include "ccr/cli.hpp"

int main(int argc, char** argv) { return ccr::run_cli(argc, argv); }

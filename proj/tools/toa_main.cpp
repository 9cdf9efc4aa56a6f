#include "toa/cli.hpp"

int main(int argc, char** argv) { return toa::run_cli(argc, argv); }

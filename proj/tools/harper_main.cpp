#include "harper/cli_runner.hpp"

int main(int argc, char** argv) { return harper::run_cli(argc, argv); }

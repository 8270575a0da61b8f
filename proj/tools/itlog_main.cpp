#include "itlog/cli.hpp"

int main(int argc, char** argv) { return itlog::run_cli(argc, argv); }

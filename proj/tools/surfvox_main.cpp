#include "surfvox/cli.hpp"

int main(int argc, char** argv) { return surfvox::cli_main(argc, argv); }

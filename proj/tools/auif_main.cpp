#include "auif/cli.hpp"

int main(int argc, char** argv) { return auif::cli_main(argc, argv); }

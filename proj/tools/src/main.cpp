#include "fngon/cli.hpp"

int main(int argc, char** argv) { return fngon::cli::cli_run(argc, argv); }

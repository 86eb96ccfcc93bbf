#include "latcell/cli.hpp"

int main(int argc, char** argv) { return latcell::cli::run_main(argc, argv); }

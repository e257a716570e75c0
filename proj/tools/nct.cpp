#include "nct/cli.hpp"

int main(int argc, char** argv) { return nct::cli::main_entry(argc, argv); }

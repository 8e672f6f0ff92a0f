#include "cli.hpp"

int main(int argc, char** argv) { return nct::cli::run(argc, argv); }

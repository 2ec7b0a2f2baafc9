#include "phaseml/cli.hpp"

int main(int argc, char** argv) { return phaseml::cli::run(argc, argv); }

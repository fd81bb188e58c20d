#include "coxdr/cli.hpp"

int main(int argc, char** argv) { return coxdr::cli::run(argc, argv); }

#include "weftprint/cli.hpp"

int main(int argc, char** argv) { return weftprint::cli::run(argc, argv); }

#include "corchete/cli.hpp"

int main(int argc, char** argv) { return corchete::cli::run(argc, argv); }

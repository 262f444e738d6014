#include "floquet/cli.hpp"

int main(int argc, char** argv) { return floquet::cli::run(argc, argv); }

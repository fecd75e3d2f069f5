#include "cli.hpp"

int main(int argc, char** argv) { return cgstencil::cli::run(argc, argv); }
